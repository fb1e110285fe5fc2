"""Factorization engines for Cullen values, totient computation, and the
persistent factor cache.

Two factoring routes exist on purpose.  The structured search is complete
for the totient-divisibility question: a prime p with p-1 dividing
C(n)-1 = n1*2^n2 must equal m*2^e + 1 with m an odd divisor of n and
e <= n2, so dividing every such prime out of C(n) decides the verdict.
The general engine (trial division plus Brent's variant of Pollard rho)
exists only for the open-problem scans where any factorization will do and
a partial result is acceptable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd, prod
from pathlib import Path
from threading import Lock

from .cullen import CullenNumber, cullen, odd_divisors, v2
from .errors import BudgetError, FalsificationError
from .primality import (
    COMPOSITE,
    DETERMINISTIC_LIMIT,
    PRIME,
    PROBABLE_PRIME,
    StructuredPrime,
    is_prime,
    proth_test,
    structured_verdict,
)

logger = logging.getLogger(__name__)

COMPLETE = "complete"
PARTIAL = "partial"

VERDICT_PRIME = "prime"
VERDICT_STRUCTURAL = "structurally_refuted"
VERDICT_SQUAREFREE = "squarefree_refuted"
VERDICT_TOTIENT = "totient_refuted"


@dataclass(frozen=True)
class Factorization:
    """A value with its known prime factors and the unfactored remainder.

    cofactor is 1 exactly when the factorization is complete; when partial
    it holds the remainder, which may be composite or simply undecided.
    probable lists any factor whose primality verdict is only probable.
    """

    value: int
    factors: tuple[tuple[int, int], ...]
    status: str
    cofactor: int = 1
    probable: tuple[int, ...] = ()

    def __post_init__(self):
        if self.status not in (COMPLETE, PARTIAL):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == COMPLETE and self.cofactor != 1:
            raise ValueError("complete factorization must have cofactor 1")
        if self.cofactor < 1:
            raise ValueError("cofactor must be positive")
        primes = [p for p, _ in self.factors]
        if primes != sorted(primes) or len(set(primes)) != len(primes):
            raise ValueError("primes must be strictly ascending")
        acc = self.cofactor
        for p, k in self.factors:
            if p < 2 or k < 1:
                raise ValueError(f"bad factor entry ({p}, {k})")
            acc *= p**k
        if acc != self.value:
            raise ValueError("factor product does not reproduce the value")

    @property
    def is_complete(self) -> bool:
        return self.status == COMPLETE

    def distinct_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def summary(self) -> str:
        toks = [f"{p}^{k}" if k > 1 else str(p) for p, k in self.factors]
        return " ".join(toks)


def euler_phi(f: Factorization) -> int:
    """Euler totient from a complete factorization."""
    if not f.is_complete:
        raise ValueError("euler_phi needs a complete factorization")
    return prod(p ** (k - 1) * (p - 1) for p, k in f.factors)


@dataclass(frozen=True)
class FactorBudget:
    """Effort descriptor for the general engine, in deterministic units."""

    trial_bound: int = 10_000
    rho_iterations: int = 262_144

    def __post_init__(self):
        if self.trial_bound < 3 or self.rho_iterations < 0:
            raise ValueError("nonsensical budget")


DEFAULT_BUDGET = FactorBudget()


@dataclass
class WorkCounter:
    """Deterministic effort accounting (reported instead of wall time)."""

    trial_divisions: int = 0
    rho_iterations: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "trial_divisions": self.trial_divisions,
            "rho_iterations": self.rho_iterations,
        }


_trial_primes_cache: dict[int, tuple[int, ...]] = {}


def _trial_primes(bound: int) -> tuple[int, ...]:
    if bound not in _trial_primes_cache:
        flags = bytearray([1]) * bound
        flags[0:2] = b"\x00\x00"
        for p in range(2, int(bound**0.5) + 1):
            if flags[p]:
                flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
        _trial_primes_cache[bound] = tuple(i for i, f in enumerate(flags) if f)
    return _trial_primes_cache[bound]


def _brent_rho(n: int, c: int, max_iters: int, counter: WorkCounter) -> int | None:
    """One Brent cycle-finding round on x -> x^2 + c (mod n), x0 = 2.

    Returns a nontrivial factor or None (failure for this c, or budget
    exhausted).  Fully deterministic given (n, c, max_iters).
    """
    y, r, q = 2, 1, 1
    g = 1
    used = 0
    x = ys = y
    while g == 1 and used < max_iters:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1 and used < max_iters:
            ys = y
            steps = min(128, r - k, max_iters - used)
            for _ in range(steps):
                y = (y * y + c) % n
                q = q * (x - y) % n
            used += steps
            g = gcd(q, n)
            k += steps
        r *= 2
    counter.rho_iterations += used
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(x - ys, n)
    if 1 < g < n:
        return g
    return None


def general_factor(
    N: int,
    budget: FactorBudget = DEFAULT_BUDGET,
    counter: WorkCounter | None = None,
) -> Factorization:
    """Trial division up to budget.trial_bound, then Pollard rho rounds
    until budget.rho_iterations is spent.  Deterministic given (N, budget):
    rho uses x0 = 2 and the polynomial constants c = 1, 2, 3, ... in order.
    """
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    if counter is None:
        counter = WorkCounter()
    found: dict[int, int] = {}
    probable: set[int] = set()
    leftovers: list[int] = []

    m = N
    for p in _trial_primes(budget.trial_bound):
        if p * p > m:
            break
        counter.trial_divisions += 1
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p

    def settle(x: int) -> None:
        """Classify x as prime (record) or composite (queue for rho)."""
        verdict = is_prime(x)
        if verdict.probably_prime:
            found[x] = found.get(x, 0) + 1
            if verdict.status == PROBABLE_PRIME:
                probable.add(x)
        else:
            stack.append(x)

    stack: list[int] = []
    if m > 1:
        settle(m)
    while stack:
        comp = stack.pop()
        if counter.rho_iterations >= budget.rho_iterations:
            leftovers.append(comp)
            continue
        d = None
        c = 1
        while d is None and counter.rho_iterations < budget.rho_iterations:
            d = _brent_rho(comp, c, budget.rho_iterations - counter.rho_iterations, counter)
            c += 1
        if d is None:
            leftovers.append(comp)
        else:
            settle(d)
            settle(comp // d)

    cofactor = prod(leftovers) if leftovers else 1
    status = COMPLETE if cofactor == 1 else PARTIAL
    return Factorization(
        value=N,
        factors=tuple(sorted(found.items())),
        status=status,
        cofactor=cofactor,
        probable=tuple(sorted(probable)),
    )


@dataclass(frozen=True)
class RefutationWitness:
    """Why a given C(n) cannot satisfy phi(C(n)) | C(n)-1, or the
    certificate that it is prime."""

    kind: str  # "proth_certificate" | "repeated_prime" | "cofactor" | "totient"
    detail: str
    proth_base: int | None = None
    repeated_prime: int | None = None
    cofactor: int | None = None
    cofactor_m: int | None = None  # odd part of cofactor-1 when the cofactor is prime
    cofactor_e: int | None = None  # v2(cofactor-1) likewise
    phi: int | None = None


@dataclass(frozen=True)
class LehmerSearchResult:
    """Outcome of the structured factor search for one index."""

    n: int
    structured_divisors: tuple[StructuredPrime, ...]
    verdict: str
    witness: RefutationWitness
    factorization: Factorization  # search state; complete iff the cofactor reached 1


def _candidate_forms(c: CullenNumber) -> list[tuple[int, int, int]]:
    """(value, m, e) for every m*2^e + 1 with m | n odd and e <= n2,
    ascending by value.  This list provably contains every prime p with
    p-1 | C(n)-1, prime or not; primality is only checked for the few
    forms that actually divide C(n)."""
    forms = [
        ((m << e) + 1, m, e)
        for m in odd_divisors(c.n)
        for e in range(1, c.n2 + 1)
    ]
    forms.sort()
    return forms


def lehmer_constrained_factor(n: int) -> LehmerSearchResult:
    """Decide how C(n) escapes the property "composite with phi | value-1".

    Order of play: a Proth certificate first (prime is one legal outcome);
    otherwise every structured candidate is divided out of C(n).  Any prime
    whose predecessor divides C(n)-1 is among the candidates, so the three
    remaining outcomes are exhaustive: a repeated candidate (not squarefree),
    a leftover cofactor (some factor has the wrong shape), or a full
    structured factorization whose totient fails the divisibility.  A fourth
    outcome would be a counterexample to the verified theorem and raises.
    """
    c = cullen(n)
    head = proth_test(c.n1, c.n2)
    if head.status == PRIME:
        fact = Factorization(c.value, ((c.value, 1),), COMPLETE)
        witness = RefutationWitness(
            kind="proth_certificate",
            detail=f"C({n}) is prime (Proth base {head.witness})",
            proth_base=head.witness,
        )
        return LehmerSearchResult(n, (), VERDICT_PRIME, witness, fact)
    if head.status != COMPOSITE:
        raise BudgetError(f"could not certify C({n}) prime or composite")

    remaining = c.value
    divisors: list[StructuredPrime] = []
    factors: list[tuple[int, int]] = []
    for value, m, e in _candidate_forms(c):
        if remaining == 1:
            break
        if remaining % value:
            continue
        if not structured_verdict(m, e).is_prime:
            continue
        mult = 0
        while remaining % value == 0:
            remaining //= value
            mult += 1
        factors.append((value, mult))
        divisors.append(StructuredPrime(m, e, value))
        if mult >= 2:
            fact = Factorization(
                c.value,
                tuple(sorted(factors)),
                COMPLETE if remaining == 1 else PARTIAL,
                cofactor=remaining,
            )
            witness = RefutationWitness(
                kind="repeated_prime",
                detail=f"{value}^2 divides C({n}), so C({n}) is not squarefree",
                repeated_prime=value,
            )
            return LehmerSearchResult(
                n, tuple(divisors), VERDICT_SQUAREFREE, witness, fact
            )

    fact = Factorization(
        c.value,
        tuple(sorted(factors)),
        COMPLETE if remaining == 1 else PARTIAL,
        cofactor=remaining,
    )
    if remaining > 1:
        witness = _cofactor_witness(c, remaining)
        return LehmerSearchResult(n, tuple(divisors), VERDICT_STRUCTURAL, witness, fact)

    phi = prod(sp.value - 1 for sp in divisors)
    if (c.value - 1) % phi:
        witness = RefutationWitness(
            kind="totient",
            detail=(
                f"C({n}) factors into structured primes only, but "
                f"phi = {phi} does not divide C({n})-1"
            ),
            phi=phi,
        )
        return LehmerSearchResult(n, tuple(divisors), VERDICT_TOTIENT, witness, fact)

    raise FalsificationError(
        "lehmer-search",
        f"C({n}) is composite, squarefree, and phi(C({n})) divides C({n})-1: "
        "this contradicts the verified theorem",
    )


def _cofactor_witness(c: CullenNumber, cofactor: int) -> RefutationWitness:
    """Explain why the leftover cofactor certifies refutation: no prime
    inside it can have predecessor dividing C(n)-1."""
    verdict = is_prime(cofactor)
    if verdict.probably_prime:
        m = (cofactor - 1) >> v2(cofactor - 1)
        e = v2(cofactor - 1)
        reasons = []
        if c.n % m:
            reasons.append(f"{m} does not divide {c.n}")
        if e > c.n2:
            reasons.append(f"2-adic part 2^{e} exceeds 2^{c.n2}")
        if not reasons:
            raise FalsificationError(
                "lehmer-search",
                f"prime cofactor {cofactor} has admissible shape yet was never "
                "enumerated; the candidate set cannot be exhaustive",
            )
        detail = (
            f"cofactor {cofactor} = {m}*2^{e} + 1 is prime but outside the "
            f"admissible shape: " + "; ".join(reasons)
        )
        return RefutationWitness(
            kind="cofactor",
            detail=detail,
            cofactor=cofactor,
            cofactor_m=m,
            cofactor_e=e,
        )
    return RefutationWitness(
        kind="cofactor",
        detail=(
            f"cofactor {cofactor} > 1 remains after removing every admissible "
            "structured prime, so some factor of C(n) has the wrong shape"
        ),
        cofactor=cofactor,
    )


def np_bound_check(n: int, p: int) -> bool:
    """Check v2(p-1) <= n for a proper divisor p > 1 of C(n).

    If v2(p-1) exceeded n, then lam = C(n)/p would be congruent to 1 mod 2^n
    yet smaller than n; those facts are jointly impossible, so the branch
    replays them concretely and raises rather than returning a quiet False.
    """
    c = cullen(n)
    if p <= 1 or p >= c.value:
        raise ValueError(f"p must satisfy 1 < p < C({n})")
    if c.value % p:
        raise ValueError(f"{p} does not divide C({n})")
    np_ = v2(p - 1)
    if np_ <= n:
        return True
    lam = c.value // p
    replay = {
        "lambda_greater_than_1": lam > 1,
        "lambda_is_1_mod_2^n": (lam - 1) % (1 << n) == 0,
        "lambda_below_n": lam < n,
    }
    raise FalsificationError(
        "np-bound",
        f"v2(p-1) = {np_} > n = {n} for p = {p} | C({n}); replay: {replay}",
    )


class FactorCache:
    """Persistent line-oriented map from index n to the factorization of C(n).

    One record per line: ``n<TAB>status<TAB>p1^e1 p2 ...<TAB>cofactor``
    (exponent suffix omitted when 1); lines starting with ``#`` are
    comments.  Malformed or arithmetically inconsistent lines are skipped
    with a logged warning and counted, never silently trusted.  Writers
    funnel through one lock; readers see the snapshot loaded at
    construction plus this process's own puts.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = Lock()
        self._entries: dict[int, Factorization] = {}
        self.skipped_lines = 0
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                try:
                    n, fact = self._parse(text)
                except (ValueError, OverflowError) as exc:
                    self.skipped_lines += 1
                    logger.warning(
                        "factor cache %s line %d skipped: %s", self.path, lineno, exc
                    )
                    continue
                self._entries[n] = fact

    @staticmethod
    def _parse(text: str) -> tuple[int, Factorization]:
        parts = text.split("\t")
        if len(parts) != 4:
            raise ValueError(f"expected 4 tab-separated fields, got {len(parts)}")
        n = int(parts[0])
        if not 1 <= n <= 10_000_000:  # building C(n) for a corrupt index would hang
            raise ValueError(f"index {n} out of the cacheable range")
        status = parts[1]
        cofactor = int(parts[3])
        factors = []
        for tok in parts[2].split():
            base, _, exp = tok.partition("^")
            factors.append((int(base), int(exp) if exp else 1))
        value = cofactor * prod(p**k for p, k in factors)
        # the line format has no probable column; the flag is recomputable
        # since a factor's verdict is probable exactly beyond the
        # deterministic threshold
        probable = tuple(p for p, _ in factors if p >= DETERMINISTIC_LIMIT)
        fact = Factorization(value, tuple(factors), status, cofactor, probable)
        if fact.value != cullen(n).value:
            raise ValueError(f"line does not reproduce C({n})")
        return n, fact

    def get(self, n: int) -> Factorization | None:
        return self._entries.get(n)

    def put(self, n: int, fact: Factorization) -> None:
        if fact.value != cullen(n).value:
            raise ValueError(f"factorization value is not C({n})")
        line = f"{n}\t{fact.status}\t{fact.summary()}\t{fact.cofactor}\n"
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
            self._entries[n] = fact

    def __len__(self) -> int:
        return len(self._entries)
