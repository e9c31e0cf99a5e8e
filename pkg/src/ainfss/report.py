from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    law: str
    detail: str
    arity: int | None = None
    order: int | None = None
    inputs: tuple[str, ...] = ()

    def line(self) -> str:
        where = []
        if self.arity is not None:
            where.append(f"n={self.arity}")
        if self.order is not None:
            where.append(f"j={self.order}")
        if self.inputs:
            where.append("(" + ",".join(self.inputs) + ")")
        loc = " ".join(where)
        return f"{self.law}{' ' + loc if loc else ''}: {self.detail}"


@dataclass
class Report:
    """Ordered list of violations; empty means the checked law holds."""
    subject: str = ""
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        # truthy when something is wrong, mirroring "nonempty report"
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def add(self, law: str, detail: str, **kw) -> None:
        self.violations.append(Violation(law, detail, **kw))

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def text(self) -> str:
        head = f"{self.subject}: " if self.subject else ""
        if self.ok:
            lines = [f"{head}ok"]
        else:
            lines = [f"{head}{len(self.violations)} violation(s)"] + ["  " + v.line() for v in self.violations]
        lines += ["  note: " + n for n in self.notes]
        return "\n".join(lines)


class InternalInconsistency(RuntimeError):
    """A step that the theory guarantees failed; indicates a bug, not bad input."""
