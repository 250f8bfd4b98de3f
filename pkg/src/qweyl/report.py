"""Verification reports: one record per executed check.

Reports are the unit of output for the whole suite.  The JSON form is
deterministic for a fixed configuration and seed except for the `millis`
field, which callers strip before hashing or comparing runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

# stable identity-family tags used by every check
CITATIONS = {
    "weight_dims": "sec-3.1",
    "divided_power": "prop-4.1",
    "ef_straightening": "cor-4.3",
    "serre": "cond-(viii)",
    "mixed_decomposition": "cor-4.8",
    "commutation": "cond-(ix)",
    "rickard_block": "sec-2.7",
    "grading_convention": "sec-2.7",
    "braid_relation": "thm-2.10",
    "weyl_compatibility": "thm-2.10",
    "block_invertible": "sec-2.7",
    "q1_determinant": "sec-2.7",
    "root_conjugation": "cor-5.4",
    "root_conjugation_divided": "cor-5.5",
    "tij_factorization": "prop-5.6",
    "rewrite_soundness": "cor-4.3",
    "rewrite_confluence": "cor-4.3",
    "rewrite_termination": "cor-4.3",
    "nilhecke_relations": "sec-6-(a)(b)(c)",
    "klr_edge": "sec-6-edge",
    "klr_composite": "thm-6.1",
}


@dataclass
class VerificationReport:
    check: str
    params: dict = field(default_factory=dict)
    status: str = "pass"  # pass | fail | skip
    citation: str = ""
    convention: dict = None
    counterexample: dict = None
    millis: float = 0.0
    seed: int = None

    def __post_init__(self):
        if not self.citation:
            self.citation = CITATIONS.get(self.check, "")

    @property
    def ok(self):
        return self.status != "fail"

    def sort_key(self):
        return (self.check, json.dumps(self.params, sort_keys=True, default=str))

    def to_json_dict(self, with_millis=True):
        out = {
            "check": self.check,
            "citation": self.citation,
            "params": self.params,
            "convention": self.convention,
            "status": self.status,
        }
        if self.status == "fail":
            cw = None
            if self.counterexample:
                cw = self.counterexample.get("weight")
            out["counterexample_weight"] = cw
        if with_millis:
            out["millis"] = round(self.millis, 3)
        out["seed"] = self.seed
        return out

    def to_json(self, with_millis=True):
        return json.dumps(self.to_json_dict(with_millis), sort_keys=False,
                          separators=(", ", ": "), default=str)

    def to_text(self):
        tag = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[self.status]
        ps = " ".join("%s=%s" % (k, v) for k, v in self.params.items())
        line = "%s  %-28s %s  [%s]  %.1f ms" % (tag, self.check, ps, self.citation, self.millis)
        if self.status == "fail" and self.counterexample:
            detail = self.counterexample.get("detail", "")
            wt = self.counterexample.get("weight")
            line += "\n      counterexample weight=%s %s" % (wt, detail)
        return line


def all_pass(reports):
    return all(r.ok for r in reports)
