"""Verification reports: named checks, series and witness blocks, in three renderings.

Every rendering is produced from the same data, so the text, CSV and key-value
forms carry identical numbers.  Nothing time- or machine-dependent goes into a
report unless explicitly added, which keeps repeated runs byte-identical.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""


@dataclass
class Section:
    name: str
    checks: list[Check] = field(default_factory=list)
    series: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    witnesses: dict[str, str] = field(default_factory=dict)

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, detail))
        return ok

    def info(self, name: str, value) -> None:
        self.checks.append(Check(name, INFO, str(value)))

    def add_series(self, name: str, coefficients) -> None:
        self.series[name] = [(int(d), int(c)) for d, c in coefficients]

    def witness(self, name: str, text: str) -> None:
        self.witnesses[name] = text

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)


@dataclass
class VerificationReport:
    header: list[tuple[str, str]] = field(default_factory=list)
    sections: list[Section] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)

    def failing(self) -> list[str]:
        return [f"{s.name}.{c.name}" for s in self.sections for c in s.checks if c.status == FAIL]

    def section(self, name: str) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def status(self, key: str) -> str:
        """Status of 'section.check'."""
        sec, _, chk = key.partition(".")
        for c in self.section(sec).checks:
            if c.name == chk:
                return c.status
        raise KeyError(key)

    def render(self, fmt: str = "keyvalue") -> str:
        if fmt == "keyvalue":
            return self._keyvalue()
        if fmt == "text":
            return self._text()
        if fmt == "csv":
            return self._csv()
        raise ValueError(f"unknown format {fmt!r}")

    def _keyvalue(self) -> str:
        out = [f"{k} = {v}" for k, v in self.header]
        for s in self.sections:
            for c in s.checks:
                out.append(f"{s.name}.{c.name} = {c.status}" + (f"  # {c.detail}" if c.detail else ""))
            for name, coeffs in s.series.items():
                out.append(f"{s.name}.series.{name} = " + ",".join(f"{d}:{c}" for d, c in coeffs))
            for name, text in s.witnesses.items():
                out.append(f"[{s.name}.witness.{name}]")
                out.extend(text.splitlines())
                out.append("[end]")
        out.append(f"overall = {PASS if self.passed else FAIL}")
        return "\n".join(out) + "\n"

    def _text(self) -> str:
        out = [f"{k}: {v}" for k, v in self.header]
        for s in self.sections:
            out.append("")
            out.append(f"== {s.name} ==")
            for c in s.checks:
                line = f"  {c.name:<44} {c.status.upper()}"
                if c.detail:
                    line += f"  ({c.detail})"
                out.append(line)
            for name, coeffs in s.series.items():
                out.append(f"  series {name}: " + " ".join(f"{d}:{c}" for d, c in coeffs))
            for name, text in s.witnesses.items():
                out.append(f"  witness {name}:")
                out.extend("    " + ln for ln in text.splitlines())
        out.append("")
        out.append(f"overall: {(PASS if self.passed else FAIL).upper()}")
        return "\n".join(out) + "\n"

    def _csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for k, v in self.header:
            w.writerow(["header", k, v])
        for s in self.sections:
            for c in s.checks:
                w.writerow(["check", f"{s.name}.{c.name}", c.status, c.detail])
            for name, coeffs in s.series.items():
                for d, c in coeffs:
                    w.writerow(["series", f"{s.name}.{name}", d, c])
        w.writerow(["overall", PASS if self.passed else FAIL])
        return buf.getvalue()
