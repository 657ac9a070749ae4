"""Embedded description layer for SCOOP programs.

A class is a field template plus a routine table; a routine is a sequence of
steps interpreted by the kernel on the hosting processor. Expressions are
plain callables taking the current :class:`Frame` (or constants), so
scenarios stay ordinary Python.

Reading a local that holds an unfilled result slot suspends the reader
until the supplier fills it (wait by necessity); expressions must therefore
be side-effect free, as they may be re-evaluated after the wait.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Union

if TYPE_CHECKING:
    from ..kernel import Frame

Expr = Union[Callable[["Frame"], Any], Any]


@dataclass(frozen=True)
class Local:
    """Expression reading a local variable or routine argument."""

    name: str

    def __call__(self, frame: Frame) -> Any:
        return frame.locals[self.name]


@dataclass(frozen=True)
class Field:
    """Expression reading a field of the current object."""

    name: str

    def __call__(self, frame: Frame) -> Any:
        return frame.fields[self.name]


def evaluate(expr: Expr, frame: Frame) -> Any:
    return expr(frame) if callable(expr) else expr


@dataclass(frozen=True)
class Predicate:
    """Named, side-effect-free wait condition.

    ``test(targets, env)`` receives read-only snapshots of the controlled
    targets' fields keyed by formal name, and a read-only view of the
    requester's arguments, locals and fields.
    """

    name: str
    test: Callable[[Mapping[str, Mapping[str, Any]], Mapping[str, Any]], bool]

    def __str__(self) -> str:
        return self.name


TRUE = Predicate("true", lambda targets, env: True)


# Steps -------------------------------------------------------------------


@dataclass(frozen=True)
class Compute:
    """Pure local computation; ``update`` returns new values for locals."""

    update: Callable[[Frame], Mapping[str, Any]]
    label: str = ""


@dataclass(frozen=True)
class SetField:
    name: str
    value: Expr


@dataclass(frozen=True)
class SeparateBlock:
    """Inline feature with controlled arguments.

    Locks the handlers named by ``targets`` (locals holding processor
    references) once ``wait`` holds, runs ``body`` and then issues unlock
    requests.
    """

    targets: tuple[str, ...]
    body: tuple[Any, ...]
    wait: Predicate = TRUE


@dataclass(frozen=True)
class Call:
    """Separate command ``target.feature(args)``."""

    target: str
    feature: str
    args: tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Query:
    """Separate query; the result slot is bound to local ``bind``."""

    target: str
    feature: str
    args: tuple[Expr, ...] = ()
    bind: str = "result"


@dataclass(frozen=True)
class NonSeparateCall:
    feature: str
    args: tuple[Expr, ...] = ()
    bind: str | None = None


@dataclass(frozen=True)
class Create:
    """Create a processor handling a fresh instance of ``cls``."""

    handle: str
    cls: str
    init: Mapping[str, Expr] = field(default_factory=dict)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple[Any, ...] = ()
    orelse: tuple[Any, ...] = ()


@dataclass(frozen=True)
class Repeat:
    count: Expr
    body: tuple[Any, ...]
    index: str | None = None


Step = Union[Compute, SetField, SeparateBlock, Call, Query, NonSeparateCall, Create, If, Repeat]


@dataclass(frozen=True)
class Routine:
    """A feature.

    ``separate`` names the formal arguments whose handlers are controlled
    (locked for the duration of the application) and ``require`` is the
    wait condition over them. A query stores its answer in local ``Result``.
    """

    name: str
    params: tuple[str, ...] = ()
    steps: tuple[Step, ...] = ()
    separate: tuple[str, ...] = ()
    require: Predicate = TRUE

    def __post_init__(self) -> None:
        unknown = set(self.separate) - set(self.params)
        if unknown:
            raise ValueError(f"{self.name}: controlled args {sorted(unknown)} are not params")


@dataclass(frozen=True)
class ClassDef:
    name: str
    fields: Mapping[str, Any] = field(default_factory=dict)
    routines: Mapping[str, Routine] = field(default_factory=dict)

    @classmethod
    def build(cls, name: str, fields: Mapping[str, Any], *routines: Routine) -> ClassDef:
        return cls(name, dict(fields), {r.name: r for r in routines})


@dataclass(frozen=True)
class Scenario:
    name: str
    classes: Mapping[str, ClassDef]
    root_class: str
    root_routine: str = "main"
    parameters: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        root = self.classes.get(self.root_class)
        if root is None or self.root_routine not in root.routines:
            raise ValueError(f"{self.name}: root routine does not resolve")
        for cdef in self.classes.values():
            for routine in cdef.routines.values():
                _check_steps(self, cdef, routine.steps)


def _check_steps(scenario: Scenario, cdef: ClassDef, steps) -> None:
    for step in steps:
        if isinstance(step, NonSeparateCall) and step.feature not in cdef.routines:
            raise ValueError(f"{scenario.name}: {cdef.name}.{step.feature} does not resolve")
        if isinstance(step, Create) and step.cls not in scenario.classes:
            raise ValueError(f"{scenario.name}: class {step.cls} does not resolve")
        for attr in ("body", "then", "orelse"):
            if hasattr(step, attr):
                _check_steps(scenario, cdef, getattr(step, attr))
