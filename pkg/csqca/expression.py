from typing import Optional, Sequence

from csqca.minimize import Implicant, Literal, Model, SolutionSet
from csqca.script_util import DataError

NO_SOLUTION = "No solution"
TRUE_TERM = "1"


def render_term(term: Implicant, condition_names: Sequence[str]) -> str:
    parts = []
    for name, lit in zip(condition_names, term.literals):
        if lit is Literal.PRESENT:
            parts.append(name)
        elif lit is Literal.ABSENT:
            parts.append(f"~{name}")
    return "*".join(parts) or TRUE_TERM


def render_expression(model: Optional[Model], condition_names: Sequence[str]) -> str:
    """`~X1*X3 + X1*X2` style text; terms follow the model's canonical order."""
    if model is None:
        return NO_SOLUTION
    return " + ".join(render_term(t, condition_names) for t in model.terms)


def solution_expression(solutions: SolutionSet, condition_names: Sequence[str]) -> str:
    return render_expression(solutions.models[0] if solutions.models else None, condition_names)


def parse_term(text: str, condition_names: Sequence[str]) -> Implicant:
    literals = [Literal.FREE] * len(condition_names)
    if text.strip() == TRUE_TERM:
        return Implicant(tuple(literals))
    for part in text.split('*'):
        part = part.strip()
        negated = part.startswith('~')
        name = part[1:] if negated else part
        if name not in condition_names:
            raise DataError(f"unknown condition {name!r} in term {text!r}")
        j = list(condition_names).index(name)
        if literals[j] is not Literal.FREE:
            raise DataError(f"condition {name!r} appears twice in term {text!r}")
        literals[j] = Literal.ABSENT if negated else Literal.PRESENT
    return Implicant(tuple(literals))


def parse_expression(text: str, condition_names: Sequence[str]) -> Optional[Model]:
    """Inverse of render_expression; "No solution" parses to None."""
    if text.strip() == NO_SOLUTION:
        return None
    return Model(tuple(parse_term(t, condition_names) for t in text.split(' + ')))
