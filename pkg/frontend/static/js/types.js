// JSON contracts of the pivot service. Field names mirror the wire format.
export {};
