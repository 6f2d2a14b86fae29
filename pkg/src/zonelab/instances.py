"""Seeded random instances, perturbation into general position, instance files.

Randomness comes from SplitMix64 (Steele, Lea & Flood 2014) so that a seed
names the same instance on every platform and in every language:

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)                       (all mod 2**64)

Bounded draws in [0, m) reject outputs >= 2**64 - (2**64 mod m) and return
``out % m``.  Hyperplanes use the stream seeded with ``seed``; the body uses
``seed ^ BODY_STREAM``; perturbation round r uses ``mix64(seed, r)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import gmpy2

from .arrangement import Hyperplane
from .body import ConvexBody, general_position_check
from .errors import GenerationFailure, MalformedInput, PerturbationFailure
from .exact import as_rational, dot, format_rational

MASK64 = (1 << 64) - 1
BODY_STREAM = 0xB0D1E5C0FFEE5EED


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            z = self.next_u64()
            if z < limit:
                return z % m

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)


def mix64(*values: int) -> int:
    """Order-sensitive 64-bit hash of small integers (one SplitMix64 step per value)."""
    h = 0
    for v in values:
        h = SplitMix64(h ^ (v & MASK64)).next_u64()
    return h


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n: int = 4
    d: int = 2
    coeff_bound: int = 10
    body_facets: int | None = None  # default 2d + 2
    body_scale: object = 1
    box: bool = False

    @property
    def m(self) -> int:
        if self.box:
            return 2 * self.d
        return self.body_facets if self.body_facets is not None else 2 * self.d + 2


def random_hyperplanes(cfg: GenConfig, max_attempts: int | None = None) -> list:
    """n distinct hyperplanes with integer coefficients in [-coeff_bound, coeff_bound]."""
    if cfg.n < 0 or cfg.d < 1:
        raise MalformedInput("need n >= 0 and d >= 1")
    if cfg.coeff_bound < 1:
        raise MalformedInput("coeff_bound must be positive")
    rng = SplitMix64(cfg.seed)
    budget = max_attempts if max_attempts is not None else 50 * cfg.n + 1000
    cb = cfg.coeff_bound
    out, seen = [], set()
    attempts = 0
    while len(out) < cfg.n:
        if attempts >= budget:
            raise GenerationFailure(
                f"only {len(out)} of {cfg.n} distinct hyperplanes after {attempts} draws "
                f"(coeff_bound={cb})")
        attempts += 1
        normal = [rng.randint(-cb, cb) for _ in range(cfg.d)]
        offset = rng.randint(-cb, cb)
        if not any(normal):
            continue
        h = Hyperplane(normal, offset)
        if h in seen:
            continue
        seen.add(h)
        out.append(h)
    return out


def random_body(cfg: GenConfig) -> ConvexBody:
    """A nonempty polyhedron with ``cfg.m`` facets around a random center.

    The center has coordinates in [-1, 1] (multiples of 1/coeff_bound).  Each
    halfspace keeps the center at depth between scale/4 and scale, measured in
    units of its normal's max-norm, so the center is strictly interior.
    """
    if cfg.m < 1:
        raise MalformedInput("a body needs at least one halfspace")
    rng = SplitMix64(cfg.seed ^ BODY_STREAM)
    cb = cfg.coeff_bound
    scale = as_rational(cfg.body_scale)
    if scale <= 0:
        raise MalformedInput("body_scale must be positive")
    center = [gmpy2.mpq(rng.randint(-cb, cb), cb) for _ in range(cfg.d)]
    halfspaces = []
    if cfg.box:
        for i in range(cfg.d):
            e = [0] * cfg.d
            e[i] = 1
            halfspaces.append((e, center[i] - scale))
            halfspaces.append(([-x for x in e], -(center[i] + scale)))
        return ConvexBody(halfspaces, cfg.d)
    while len(halfspaces) < cfg.m:
        normal = [rng.randint(-cb, cb) for _ in range(cfg.d)]
        if not any(normal):
            continue
        depth = scale * gmpy2.mpq(rng.randint(1, 4), 4) * max(abs(a) for a in normal)
        halfspaces.append((normal, dot([as_rational(a) for a in normal], center) - depth))
    return ConvexBody(halfspaces, cfg.d)


def perturb(H, K: ConvexBody, precision: int = 64, seed: int = 0, rounds: int = 8) -> list:
    """Move hyperplanes slightly until (H, K) is in general position.

    Offsets get random shifts of magnitude <= 1/precision; normals are shifted
    too once offsets alone have failed twice, or straight away if some
    hyperplanes are parallel.  Each round doubles the precision and starts
    again from the original ``H``.
    """
    H = [h if isinstance(h, Hyperplane) else Hyperplane(*h) for h in H]
    findings = general_position_check(H, K)
    if not findings:
        return H
    if precision < 1:
        raise MalformedInput("precision must be positive")
    grain = 1000
    parallel = any(f.check == "a" for f in findings)
    for r in range(rounds):
        rng = SplitMix64(mix64(seed, r))
        prec = precision << r
        touch_normals = parallel or r >= 2
        moved = []
        for h in H:
            offset = h.offset + gmpy2.mpq(rng.randint(-grain, grain), grain * prec)
            normal = h.normal
            if touch_normals:
                normal = tuple(a + gmpy2.mpq(rng.randint(-grain, grain), grain * prec)
                               for a in normal)
            if not any(normal):
                break
            moved.append(Hyperplane(normal, offset))
        if len(moved) != len(H) or len(set(moved)) != len(moved):
            continue
        findings = general_position_check(moved, K)
        if not findings:
            return moved
        parallel = parallel or any(f.check == "a" for f in findings)
    raise PerturbationFailure(f"still degenerate after {rounds} perturbation rounds", findings)


# ---------------------------------------------------------------------------
# instance files


@dataclass
class Instance:
    dim: int
    hyperplanes: list
    body: ConvexBody
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "hyperplanes": [
                {"a": [format_rational(x) for x in h.normal], "b": format_rational(h.offset)}
                for h in self.hyperplanes
            ],
            "body": body_to_dict(self.body),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        try:
            dim = int(data["dim"])
            hs = [Hyperplane(h["a"], h["b"]) for h in data["hyperplanes"]]
            body = body_from_dict(data.get("body", {"dim": dim, "halfspaces": []}))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad instance file: {exc}") from exc
        if body.dim != dim or any(h.dim != dim for h in hs):
            raise MalformedInput("instance dimensions disagree")
        return cls(dim, hs, body, data.get("seed"))

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"bad instance file: {exc}") from exc

    @classmethod
    def read(cls, path) -> "Instance":
        return cls.from_json(Path(path).read_text())


def body_to_dict(K: ConvexBody) -> dict:
    return {
        "dim": K.dim,
        "halfspaces": [
            {"c": [format_rational(x) for x in c.coefficients], "d": format_rational(c.offset)}
            for c in K.halfspaces
        ],
    }


def body_from_dict(data: dict) -> ConvexBody:
    return ConvexBody([(h["c"], h["d"]) for h in data["halfspaces"]], int(data["dim"]))


def generate(cfg: GenConfig) -> Instance:
    return Instance(cfg.d, random_hyperplanes(cfg), random_body(cfg), cfg.seed)
