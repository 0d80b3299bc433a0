"""Audit records and their line-oriented text form."""

from __future__ import annotations

from dataclasses import dataclass, field


def fmt(x) -> str:
    """Locale-free 17-significant-digit rendering of a real number."""
    return format(float(x), ".17g")


def fmt_complex(z) -> str:
    z = complex(z)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 or z.imag != z.imag else '-'}{fmt(abs(z.imag))}i"


@dataclass(frozen=True)
class AuditRecord:
    audit: str
    point: str
    margin: float
    passed: bool

    def line(self) -> str:
        return f"{self.audit}\t{self.point}\t{fmt(self.margin)}\t{'pass' if self.passed else 'FAIL'}"


@dataclass
class AuditReport:
    """Outcome of one numerical audit.

    ``margin`` is positive when the audited inequality holds with room to
    spare; its unit depends on the audit and is documented by each producer.
    """

    name: str
    records: list[AuditRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, point: str, margin: float, passed: bool | None = None) -> None:
        if passed is None:
            passed = bool(margin >= 0)
        self.records.append(AuditRecord(self.name, point, float(margin), bool(passed)))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def violations(self) -> list[AuditRecord]:
        return [r for r in self.records if not r.passed]

    def lines(self) -> list[str]:
        return [r.line() for r in self.records]
