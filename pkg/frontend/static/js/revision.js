// Discards responses that arrive after a newer request was issued.
//
// Every state-changing call takes a ticket before awaiting; when the
// response lands, it is applied only if no younger ticket exists. The
// server serializes the actual mutations, so dropping a stale response
// never loses state: the younger response carries the full session.
export class RevisionGate {
    constructor() {
        this.current = 0;
    }
    take() {
        this.current += 1;
        return this.current;
    }
    isCurrent(ticket) {
        return ticket === this.current;
    }
}
