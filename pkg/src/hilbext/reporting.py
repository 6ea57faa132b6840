"""Check and report containers shared by verification routines and the CLI.

Reports are deterministic: given the same inputs and seed they render to
byte-identical text.  Wall-clock timings are collected but excluded from
the default rendering for exactly that reason (pass ``timings=True`` to
see them).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    residual: float | None = None
    tolerance: float | None = None
    detail: str = ""
    runtime: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"check {self.name:<42s} {status}"]
        if self.residual is not None:
            parts.append(f"residual={self.residual:.3e}")
        if self.tolerance is not None:
            parts.append(f"tol={self.tolerance:.1e}")
        if self.detail:
            parts.append(f"[{self.detail}]")
        return " ".join(parts)


@dataclass
class Report:
    title: str
    header: dict[str, str] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def add(
        self,
        name: str,
        passed: bool,
        residual: float | None = None,
        tolerance: float | None = None,
        detail: str = "",
        runtime: float = 0.0,
    ) -> Check:
        check = Check(name, bool(passed), residual, tolerance, detail, runtime)
        self.checks.append(check)
        return check

    def check_residual(
        self, name: str, residual: float, tolerance: float, detail: str = ""
    ) -> Check:
        return self.add(name, residual <= tolerance, residual, tolerance, detail)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(
                Check(prefix + c.name, c.passed, c.residual, c.tolerance, c.detail, c.runtime)
            )

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def worst_residual(self) -> float:
        residuals = [c.residual for c in self.checks if c.residual is not None]
        return max(residuals) if residuals else 0.0

    def render_text(self, timings: bool = False) -> str:
        lines = [f"# {self.title}"]
        for key, value in self.header.items():
            lines.append(f"{key}: {value}")
        for c in self.checks:
            line = c.line()
            if timings:
                line += f" ({c.runtime:.3f}s)"
            lines.append(line)
        status = "PASS" if self.passed else "FAIL"
        lines.append(f"overall: {status} ({len(self.checks)} checks)")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "header": dict(self.header),
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
            "overall": self.passed,
        }

    def render_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1
