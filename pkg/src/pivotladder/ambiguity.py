"""Classifying prospective pivots and suggesting a mode for them.

A pivot back into an already-visited class is only ambiguous when direct
filters are in play; with no effective filter anywhere, fan-in and fan-out
coincide and there is nothing to decide. The classifier is total over
(session, class) and the three outcomes are mutually exclusive:

* ``PivotsOnly`` — no effective direct filter exists in the chain.
* ``FilteredAcyclic`` — filters exist but the target class is new.
* ``FilteredCycle`` — filters exist and the target class was visited.

The suggestion rule: on a FilteredCycle, fan in when direct filters were
applied strictly after the prior visit (those express an intent to narrow),
fan out when none intervened (the user is retracing their own steps).
Snipped filters and filters disabled by global scope do not count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

from .filters import filter_label

if TYPE_CHECKING:
    from .engine import PivotSession

PIVOTS_ONLY = "PivotsOnly"
FILTERED_ACYCLIC = "FilteredAcyclic"
FILTERED_CYCLE = "FilteredCycle"

INTERVENING = "InterveningFilters"
NO_INTERVENING = "NoInterveningFilters"
NOT_AMBIGUOUS = "NotAmbiguous"

FANIN = "fanin"
FANOUT = "fanout"
INTERSECT = "intersect"


@dataclass(frozen=True)
class AmbiguityReport:
    classification: str
    prior_visit_step: Optional[int]
    prior_direct_filters: tuple[int, ...]       # effective filter ids at that visit
    intervening_filter_steps: tuple[int, ...]   # steps after the visit with effective filters

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "priorVisitStep": self.prior_visit_step,
            "priorDirectFilters": list(self.prior_direct_filters),
            "interveningFilterSteps": list(self.intervening_filter_steps),
        }


@dataclass(frozen=True)
class HeuristicDecision:
    suggested_mode: str          # fanin | fanout
    rationale: str
    overridable: bool = True

    def to_json(self) -> dict:
        return {
            "suggestedMode": self.suggested_mode,
            "rationale": self.rationale,
            "overridable": self.overridable,
        }


def _effective(session: "PivotSession", spec) -> bool:
    return spec.active and session.global_scope


def classify(session: "PivotSession", target_class: str) -> AmbiguityReport:
    """Taxonomy of the pivot the user is about to make into ``target_class``."""
    session.graph.require_node_class(target_class)

    prior_visit: Optional[int] = None
    for step in reversed(session.steps):
        if step.category == target_class:
            prior_visit = step.index
            break

    any_effective = False
    prior_filters: tuple[int, ...] = ()
    intervening: list[int] = []
    for step in session.steps:
        effective_here = [f.id for f in step.direct_filters if _effective(session, f)]
        if effective_here:
            any_effective = True
        if prior_visit is not None:
            if step.index == prior_visit:
                prior_filters = tuple(effective_here)
            elif step.index > prior_visit and effective_here:
                intervening.append(step.index)

    if not any_effective:
        classification = PIVOTS_ONLY
    elif prior_visit is None:
        classification = FILTERED_ACYCLIC
    else:
        classification = FILTERED_CYCLE
    return AmbiguityReport(
        classification=classification,
        prior_visit_step=prior_visit,
        prior_direct_filters=prior_filters,
        intervening_filter_steps=tuple(intervening),
    )


def suggest(session: "PivotSession",
            target_class: str) -> tuple[AmbiguityReport, HeuristicDecision]:
    report = classify(session, target_class)
    return report, decide(report)


def decide(report: AmbiguityReport) -> HeuristicDecision:
    if report.classification != FILTERED_CYCLE:
        return HeuristicDecision(FANOUT, NOT_AMBIGUOUS)
    if report.intervening_filter_steps:
        return HeuristicDecision(FANIN, INTERVENING)
    return HeuristicDecision(FANOUT, NO_INTERVENING)


def explain(session: "PivotSession", report: AmbiguityReport,
            decision: HeuristicDecision) -> dict:
    """What the suggestion would do, spelled out for a dialog or the CLI.

    On a fan-in the prior visit's filters get re-applied; on a fan-out over
    a cycle they get dropped. When the prior visit carried no direct filter
    at all, neither mode recovers "only the nodes I had there", so the
    intersect override is called out explicitly.
    """
    by_id = {}
    for step in session.steps:
        for f in step.direct_filters:
            by_id[f.id] = f

    def named(ids) -> list[dict]:
        return [
            {"id": fid, "label": filter_label(by_id[fid])}
            for fid in ids if fid in by_id
        ]

    cycle = report.classification == FILTERED_CYCLE
    reapplied = named(report.prior_direct_filters) if decision.suggested_mode == FANIN else []
    dropped = named(report.prior_direct_filters) if (cycle and decision.suggested_mode == FANOUT) else []

    alternatives = [
        {"mode": FANIN,
         "description": "keep the earlier filters on this class in force"},
        {"mode": FANOUT,
         "description": "take every connected node, earlier filters dropped"},
    ]
    note = None
    if cycle:
        alternatives.append(
            {"mode": INTERSECT,
             "description": "restrict to the nodes you had at the prior visit"})
        if not report.prior_direct_filters:
            note = (
                "the prior visit carries no direct filter, so fan-in adds "
                "nothing; intersect re-uses the node set from that visit"
            )

    return {
        "classification": report.classification,
        "suggestedMode": decision.suggested_mode,
        "rationale": decision.rationale,
        "overridable": decision.overridable,
        "priorVisitStep": report.prior_visit_step,
        "interveningFilterSteps": list(report.intervening_filter_steps),
        "reappliedFilters": reapplied,
        "droppedFilters": dropped,
        "alternatives": alternatives,
        "note": note,
    }
