"""Tiny pass/fail reporting structures shared by the verification
suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """A single named identity check.  witness holds a residual (or
    other counterexample data) when the check fails."""
    name: str
    ok: bool
    witness: object = None

    def as_dict(self):
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if not self.ok and self.witness is not None:
            w = self.witness
            d["witness"] = w.to_json_dict() if hasattr(w, "to_json_dict") else str(w)
        return d


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    def add(self, name, ok, witness=None):
        self.checks.append(Check(name, bool(ok), witness))

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def as_dict(self):
        return {
            "suite": self.suite,
            "status": "pass" if self.ok else "fail",
            "checks": [c.as_dict() for c in self.checks],
        }

    def lines(self):
        out = []
        for c in self.checks:
            out.append("%s %s" % ("PASS" if c.ok else "FAIL", c.name))
        return out
