"""Elementary Z-modules: the coefficient objects of the derived engine.

An elementary module is a finite formal direct sum of four kinds of
atoms:

* ``Z^r``                      -- free of finite rank,
* ``Z[S^-1]^r``                -- free over the localization inverting a
                                  finite or cofinite set S of primes,
* ``(Z/p^e)^m``                -- finite p-power torsion,
* ``(sum_{p in P} Z(p^oo))^m`` -- Pruefer (divisible p-torsion) summed
                                  over a finite or cofinite prime set P.

This class of modules is closed under every operation the truncation
engine performs: torsion part, divisible part, localization, quotients
by torsion, and the canonical extensions appearing in local-cohomology
triangles.  Finitely generated modules are exactly the sums of free and
finite-torsion atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .spectrum import ZSubset


def _set_key(s: ZSubset):
    return (s.kind, tuple(sorted(s.primes)))


def _merge_sets(entries):
    # entries: iterable of (ZSubset, int); merge equal sets, drop zeros/empties
    acc: dict = {}
    for s, n in entries:
        if n == 0 or s.is_empty:
            continue
        if n < 0:
            raise ValueError("negative multiplicity")
        key = _set_key(s)
        acc[key] = (s, acc.get(key, (s, 0))[1] + n)
    return tuple(sorted(acc.values(), key=lambda e: _set_key(e[0])))


def _merge_torsion(entries):
    acc: dict = {}
    for p, e, m in entries:
        if m == 0:
            continue
        if m < 0 or e < 1:
            raise ValueError("bad torsion entry")
        acc[(p, e)] = acc.get((p, e), 0) + m
    return tuple((p, e, m) for (p, e), m in sorted(acc.items()))


@dataclass(frozen=True)
class ElementaryModule:
    free_rank: int = 0
    localized: tuple = ()  # ((ZSubset, rank), ...) with nonempty sets
    torsion: tuple = ()    # ((p, e, mult), ...)
    prufer: tuple = ()     # ((ZSubset, mult), ...) with nonempty sets

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative rank")
        object.__setattr__(self, "localized", _merge_sets(self.localized))
        object.__setattr__(self, "torsion", _merge_torsion(self.torsion))
        object.__setattr__(self, "prufer", _merge_sets(self.prufer))
        for s, _ in self.localized + self.prufer:
            if s.is_whole:
                raise ValueError("localization/Pruefer sets are sets of maximal ideals")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero() -> "ElementaryModule":
        return ElementaryModule()

    @staticmethod
    def free(rank: int) -> "ElementaryModule":
        return ElementaryModule(free_rank=rank)

    @staticmethod
    def localized_free(inverted: ZSubset, rank: int) -> "ElementaryModule":
        """Z with the primes of ``inverted`` made invertible, rank copies.

        Inverting nothing is plain Z:

        >>> ElementaryModule.localized_free(ZSubset.empty(), 2)
        ElementaryModule.free(2)
        """
        if rank == 0:
            return ElementaryModule()
        if inverted.is_empty:
            return ElementaryModule(free_rank=rank)
        return ElementaryModule(localized=((inverted, rank),))

    @staticmethod
    def cyclic_torsion(p: int, e: int, mult: int = 1) -> "ElementaryModule":
        if mult == 0:
            return ElementaryModule()
        return ElementaryModule(torsion=((p, e, mult),))

    @staticmethod
    def prufer_sum(primes: ZSubset, mult: int = 1) -> "ElementaryModule":
        if mult == 0 or primes.is_empty:
            return ElementaryModule()
        return ElementaryModule(prufer=((primes, mult),))

    @staticmethod
    def from_fg(module) -> "ElementaryModule":
        """Embed a finitely generated module given by rank and torsion."""
        return ElementaryModule(free_rank=module.rank, torsion=tuple(module.torsion))

    # -- structure ------------------------------------------------------------

    def __add__(self, other: "ElementaryModule") -> "ElementaryModule":
        return ElementaryModule(
            self.free_rank + other.free_rank,
            self.localized + other.localized,
            self.torsion + other.torsion,
            self.prufer + other.prufer,
        )

    def scale(self, n: int) -> "ElementaryModule":
        """Direct sum of n copies."""
        if n == 0:
            return ElementaryModule()
        return ElementaryModule(
            self.free_rank * n,
            tuple((s, r * n) for s, r in self.localized),
            tuple((p, e, m * n) for p, e, m in self.torsion),
            tuple((s, m * n) for s, m in self.prufer),
        )

    @property
    def is_zero(self) -> bool:
        return not (self.free_rank or self.localized or self.torsion or self.prufer)

    @property
    def is_fg(self) -> bool:
        """Finitely generated over Z: no Pruefer part, no proper localization."""
        return not self.localized and not self.prufer

    @property
    def rational_rank(self) -> int:
        return self.free_rank + sum(r for _, r in self.localized)

    def torsion_primes(self) -> frozenset[int]:
        return frozenset(p for p, _, _ in self.torsion)

    def mentioned_primes(self) -> frozenset[int]:
        """Every prime named anywhere in the atom data."""
        out = set(p for p, _, _ in self.torsion)
        for s, _ in self.localized + self.prufer:
            out |= s.primes
        return frozenset(out)

    def fg_part(self):
        """(rank, torsion) of the finitely generated atoms only."""
        return self.free_rank, self.torsion

    # -- support ---------------------------------------------------------------

    def support(self):
        """Support as (contains_generic, set-of-maximals).

        The support of a localization is not specialization-stable, so the
        result is a plain pair rather than an sp-subset:

        >>> ElementaryModule.localized_free(ZSubset.finite([2]), 1).support()
        (True, ZSubset.cofinite([2]))
        """
        generic = self.free_rank > 0 or bool(self.localized)
        maximals = ZSubset.empty()
        if self.free_rank > 0:
            maximals = ZSubset.cofinite([])
        for s, _ in self.localized:
            maximals = maximals.join(ZSubset.cofinite([]).minus(s))
        for p, _, _ in self.torsion:
            maximals = maximals.join(ZSubset.finite([p]))
        for s, _ in self.prufer:
            maximals = maximals.join(s)
        return generic, maximals

    def support_in(self, Z: ZSubset) -> bool:
        """Is the support contained in the sp-subset Z?"""
        generic, maximals = self.support()
        if generic and not Z.is_whole:
            return False
        return maximals.issubset(Z if not Z.is_whole else ZSubset.cofinite([]))

    def __repr__(self):
        if self.is_zero:
            return "ElementaryModule.zero()"
        parts = []
        if not self.localized and not self.torsion and not self.prufer:
            return f"ElementaryModule.free({self.free_rank})"
        if self.free_rank:
            parts.append(f"free_rank={self.free_rank}")
        if self.localized:
            parts.append(f"localized={self.localized!r}")
        if self.torsion:
            parts.append(f"torsion={self.torsion!r}")
        if self.prufer:
            parts.append(f"prufer={self.prufer!r}")
        return "ElementaryModule(" + ", ".join(parts) + ")"

    def __str__(self):
        if self.is_zero:
            return "0"
        bits = []
        if self.free_rank:
            bits.append("Z" + (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        for s, r in self.localized:
            if s.kind == "cofinite" and not s.primes:
                base = "Q"
            elif s.kind == "finite":
                base = "Z[1/" + "*".join(str(p) for p in sorted(s.primes)) + "]"
            else:
                base = f"Z[inv {s}]"
            bits.append(base + (f"^{r}" if r > 1 else ""))
        for p, e, m in self.torsion:
            bits.append(f"Z/{p**e}" + (f"^{m}" if m > 1 else ""))
        for s, m in self.prufer:
            if s.kind == "finite":
                base = "+".join(f"Z({p}^oo)" for p in sorted(s.primes))
                if len(s.primes) > 1:
                    base = "(" + base + ")"
            else:
                base = f"Pruefer[{s}]"
            bits.append(base + (f"^{m}" if m > 1 else ""))
        return " + ".join(bits)

    # -- JSON -------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "free": self.free_rank,
            "localized": [{"inverted": s.to_json(), "rank": r} for s, r in self.localized],
            "torsion": [[p, e, m] for p, e, m in self.torsion],
            "prufer": [{"primes": s.to_json(), "mult": m} for s, m in self.prufer],
        }

    @staticmethod
    def from_json(obj: dict) -> "ElementaryModule":
        from .spectrum import subset_from_json, SPEC_Z

        return ElementaryModule(
            obj.get("free", 0),
            tuple(
                (subset_from_json(e["inverted"], SPEC_Z), e["rank"])
                for e in obj.get("localized", ())
            ),
            tuple(tuple(t) for t in obj.get("torsion", ())),
            tuple(
                (subset_from_json(e["primes"], SPEC_Z), e["mult"])
                for e in obj.get("prufer", ())
            ),
        )
