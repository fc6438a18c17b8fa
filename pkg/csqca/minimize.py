"""Exact two-level minimization of a truth table: Quine-McCluskey prime implicants,
Petrick enumeration of every minimal cover, and the three QCA solution types."""
import enum
import itertools
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from csqca.script_util import DataError
from csqca.truth_table import TruthTable


class Literal(enum.IntEnum):
    ABSENT = 0
    PRESENT = 1
    FREE = 2


# canonical tie-break rank of a literal inside a term
_RANK = {Literal.PRESENT: 0, Literal.ABSENT: 1, Literal.FREE: 2}


@dataclass(frozen=True)
class Implicant:
    """A conjunction over the conditions in declared order (a subcube of {0,1}^k)."""
    literals: Tuple[Literal, ...]
    care: int = field(init=False, repr=False, compare=False)
    value: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        literals = tuple(Literal(v) for v in self.literals)
        care = value = 0
        for lit in literals:
            care, value = care << 1, value << 1
            if lit is not Literal.FREE:
                care |= 1
                value |= int(lit)
        object.__setattr__(self, 'literals', literals)
        object.__setattr__(self, 'care', care)
        object.__setattr__(self, 'value', value)

    @classmethod
    def from_bits(cls, value: int, free_mask: int, k: int) -> "Implicant":
        literals = []
        for j in range(k - 1, -1, -1):
            if (free_mask >> j) & 1:
                literals.append(Literal.FREE)
            else:
                literals.append(Literal((value >> j) & 1))
        return cls(tuple(literals))

    @property
    def k(self) -> int:
        return len(self.literals)

    @property
    def n_literals(self) -> int:
        return sum(1 for lit in self.literals if lit is not Literal.FREE)

    def covers(self, config: int) -> bool:
        return (config & self.care) == self.value

    def configs(self) -> Iterator[int]:
        free = [self.k - 1 - j for j, lit in enumerate(self.literals) if lit is Literal.FREE]
        for combo in range(2 ** len(free)):
            config = self.value
            for pos, bit in enumerate(free):
                if (combo >> pos) & 1:
                    config |= 1 << bit
            yield config

    def subsumes(self, other: "Implicant") -> bool:
        """True when every configuration of `other` is also covered by this term."""
        return (self.care & other.care) == self.care and (other.value & self.care) == self.value

    def sort_key(self):
        n_absent = sum(1 for lit in self.literals if lit is Literal.ABSENT)
        return (self.n_literals, -n_absent, tuple(_RANK[lit] for lit in self.literals))


@dataclass(frozen=True)
class Model:
    """A disjunction of implicants, kept in canonical term order."""
    terms: Tuple[Implicant, ...]

    def __post_init__(self):
        terms = tuple(sorted(set(self.terms), key=Implicant.sort_key))
        if not terms:
            raise DataError("a model needs at least one term")
        for a in terms:
            for b in terms:
                if a is not b and a.subsumes(b):
                    raise DataError("model terms must not absorb each other")
        object.__setattr__(self, 'terms', terms)

    @property
    def n_literals(self) -> int:
        return sum(t.n_literals for t in self.terms)

    def covers(self, config: int) -> bool:
        return any(t.covers(config) for t in self.terms)

    def sort_key(self):
        return (len(self.terms), self.n_literals, tuple(t.sort_key() for t in self.terms))


class SolutionType(enum.Enum):
    CONSERVATIVE = "conservative"
    PARSIMONIOUS = "parsimonious"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class SolutionSet:
    models: Tuple[Model, ...]
    epi: FrozenSet[Implicant]
    spi: FrozenSet[Implicant]
    solution_type: SolutionType
    dir_exp: Optional[Tuple[Optional[int], ...]] = None
    # bounding models an intermediate model was derived from
    conservative: Optional[Model] = None
    parsimonious: Optional[Model] = None
    # false when no parsimonious model contains every conservative term
    bounded: bool = True

    @property
    def n_solutions(self) -> int:
        return len(self.models)


def _check_configs(configs: Iterable[int], k: int, what: str) -> FrozenSet[int]:
    configs = frozenset(int(c) for c in configs)
    bad = [c for c in configs if not 0 <= c < 2 ** k]
    if bad:
        raise DataError(f"{what} configuration {bad[0]} does not fit {k} conditions")
    return configs


def find_prime_implicants(on: Iterable[int], dc: Iterable[int], k: int) -> FrozenSet[Implicant]:
    """Maximal subcubes of on | dc that cover at least one `on` configuration."""
    if k <= 0:
        raise DataError("prime implicants need at least one condition")
    on, dc = _check_configs(on, k, "on"), _check_configs(dc, k, "don't-care")
    if on & dc:
        raise DataError("on and don't-care sets overlap")
    if not on:
        return frozenset()

    # cubes as (value, free_mask); value has 0 on free positions
    level: Set[Tuple[int, int]] = {(c, 0) for c in on | dc}
    primes: Set[Tuple[int, int]] = set()
    while level:
        merged: Set[Tuple[int, int]] = set()
        used: Set[Tuple[int, int]] = set()
        for value, mask in level:
            for j in range(k):
                bit = 1 << j
                if mask & bit or value & bit:
                    continue
                partner = (value | bit, mask)
                if partner in level:
                    merged.add((value, mask | bit))
                    used.add((value, mask))
                    used.add(partner)
        primes |= level - used
        level = merged

    result = set()
    for value, mask in primes:
        implicant = Implicant.from_bits(value, mask, k)
        if any(implicant.covers(c) for c in on):
            result.add(implicant)
    return frozenset(result)


def _absorb(products: Set[FrozenSet[int]]) -> Set[FrozenSet[int]]:
    kept: List[FrozenSet[int]] = []
    for p in sorted(products, key=len):
        if not any(q <= p for q in kept):
            kept.append(p)
    return set(kept)


def enumerate_minimal_covers(pis: Iterable[Implicant], on: Iterable[int]) -> List[Model]:
    """Every cover of `on` with the fewest terms, then the fewest literals (Petrick's method)."""
    pis = sorted(set(pis), key=Implicant.sort_key)
    on = sorted(set(on))
    if not on:
        return []
    clauses: Set[FrozenSet[int]] = set()
    for config in on:
        clause = frozenset(i for i, p in enumerate(pis) if p.covers(config))
        if not clause:
            return []
        clauses.add(clause)
    clauses = _absorb(clauses)

    products: Set[FrozenSet[int]] = {frozenset()}
    for clause in sorted(clauses, key=lambda c: (len(c), sorted(c))):
        expanded = set()
        for product in products:
            if product & clause:
                expanded.add(product)
            else:
                expanded.update(product | {i} for i in clause)
        products = _absorb(expanded)

    def cost(product):
        return (len(product), sum(pis[i].n_literals for i in product))

    best = min(cost(p) for p in products)
    models = [Model(tuple(pis[i] for i in p)) for p in products if cost(p) == best]
    return sorted(models, key=Model.sort_key)


def derive_intermediate(conservative: Model, parsimonious: Model, dir_exp: Sequence[Optional[int]]) -> Model:
    """Easy-counterfactual filtering: widen each conservative term towards every parsimonious
    term that contains it, keeping only the dropped literals that agree with `dir_exp`.
    A conservative term that no single parsimonious term contains is kept as is."""
    terms = []
    for c in conservative.terms:
        containing = [p for p in parsimonious.terms if p.subsumes(c)]
        if not containing:
            terms.append(c)
        for p in containing:
            literals = []
            for j, (c_lit, p_lit) in enumerate(zip(c.literals, p.literals)):
                if p_lit is not Literal.FREE or c_lit is Literal.FREE:
                    literals.append(p_lit)
                elif dir_exp[j] is not None and int(c_lit) == dir_exp[j]:
                    literals.append(c_lit)
                else:
                    literals.append(Literal.FREE)
            terms.append(Implicant(tuple(literals)))
    unique = set(terms)
    kept = [t for t in unique if not any(o is not t and o.subsumes(t) for o in unique)]
    return Model(tuple(kept))


def nests_in(conservative: Model, parsimonious: Model) -> bool:
    """True when every conservative term lies inside a single parsimonious term."""
    return all(any(p.subsumes(c) for p in parsimonious.terms) for c in conservative.terms)


def identify_epi_spi(models: Sequence[Model]) -> Tuple[FrozenSet[Implicant], FrozenSet[Implicant]]:
    """Terms shared by every model, and terms found in only some of them."""
    if not models:
        raise ValueError("no models: epi/spi are undefined without a solution")
    term_sets = [frozenset(m.terms) for m in models]
    epi = frozenset.intersection(*term_sets)
    spi = frozenset.union(*term_sets) - epi
    return epi, spi


def check_dir_exp(dir_exp: Optional[Sequence[Optional[int]]], k: int, include_remainders: bool):
    if dir_exp is None:
        return None
    if not include_remainders:
        raise DataError("directional expectations require remainder inclusion")
    dir_exp = tuple(None if v is None else int(v) for v in dir_exp)
    if len(dir_exp) != k:
        raise DataError(f"dir_exp has {len(dir_exp)} entries for {k} conditions")
    if any(v not in (None, 0, 1) for v in dir_exp):
        raise DataError("dir_exp entries must be 1, 0 or None")
    return dir_exp


def _solve(on: FrozenSet[int], dc: FrozenSet[int], k: int) -> List[Model]:
    return enumerate_minimal_covers(find_prime_implicants(on, dc, k), on)


def minimize(tt: TruthTable, include_remainders: bool = False,
             dir_exp: Optional[Sequence[Optional[int]]] = None) -> SolutionSet:
    dir_exp = check_dir_exp(dir_exp, tt.k, include_remainders)
    if not include_remainders:
        solution_type = SolutionType.CONSERVATIVE
    elif dir_exp is None:
        solution_type = SolutionType.PARSIMONIOUS
    else:
        solution_type = SolutionType.INTERMEDIATE

    on = tt.positive
    if not on:
        return SolutionSet(models=(), epi=frozenset(), spi=frozenset(),
                           solution_type=solution_type, dir_exp=dir_exp)

    conservative = parsimonious = None
    bounded = True
    if solution_type is SolutionType.CONSERVATIVE:
        models = _solve(on, frozenset(), tt.k)
    elif solution_type is SolutionType.PARSIMONIOUS:
        models = _solve(on, tt.remainders, tt.k)
    else:
        pairs = list(itertools.product(_solve(on, frozenset(), tt.k), _solve(on, tt.remainders, tt.k)))
        nested = [pair for pair in pairs if nests_in(*pair)]
        bounded = bool(nested)
        conservative, parsimonious = nested[0] if nested else pairs[0]
        models = [derive_intermediate(conservative, parsimonious, dir_exp)]

    epi, spi = identify_epi_spi(models)
    return SolutionSet(models=tuple(models), epi=epi, spi=spi, solution_type=solution_type,
                       dir_exp=dir_exp, conservative=conservative, parsimonious=parsimonious,
                       bounded=bounded)
