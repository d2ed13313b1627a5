"""Tree-to-matrix encoding and the homomorphic proof-step operators.

Every signature symbol of arity d owns d + 1 polynomial variables: one
vertex variable (slot 0) and one edge variable per child (slots 1..d).
A formula tree encodes recursively as

    [leaf x]          = A(X)
    [c(T1, ..., Td)]  = A(C) + A(C1)[T1] + ... + A(Cd)[Td]

which assigns one monomial per tree node: the product of the edge
variables along the root-to-node path times the node's vertex variable.
Distinct formulas get distinct matrices up to 6 nodes; from 7 nodes on the
encoding is slightly coarser than formula identity (see README, "Known
limitation").

A fingerprint extends the encoding with one helper matrix per tracked
arity-0 symbol x: the sum of the path products leading to the x-leaves
(the identity for the single-node formula x, the zero matrix when x does
not occur).  The helpers are exactly what makes modus ponens and
substitution computable on encodings without seeing the formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

from .encmat import EncMatrix, elem, elem_inv_mul, identity, zero_matrix
from .logic import IMPLIES, METAVARIABLES, NOT, Formula, Signature
from .mpoly import VarId


class UnallocatedSymbol(Exception):
    """A formula symbol has no variables in the allocation."""


class UntrackedVariable(Exception):
    """A homomorphic operation needs a helper that was not tracked."""


_BUILTIN_SLOTS = ((IMPLIES, ("I", "I1", "I2")), (NOT, ("N", "N1")))


class VarAllocation:
    """Assigns polynomial variable ids and display names to (symbol, slot).

    The builtin connectives get fixed ids: the implication slots are 0, 1,
    2 and the negation slots are 3, 4.  Remaining signature symbols are
    sorted by name and take consecutive ids from 5, slot by slot.  The
    axiom metavariables are appended at the end so that instantiating an
    axiom homomorphically from its template needs no extra bookkeeping.

    Display names (used in assignment files and rendered polynomials)
    uppercase the symbol name where that stays unambiguous and fall back
    to the name itself, then to underscore-suffixed variants.
    """

    def __init__(self, sig: Signature):
        self.signature = sig
        self._vid: Dict[Tuple[str, int], VarId] = {}
        self._display: List[str] = []
        self._arity: Dict[str, int] = {}
        used = set()

        def claim(sym: str, slot_names: Iterable[str]):
            for slot, nm in enumerate(slot_names):
                self._vid[(sym, slot)] = len(self._display)
                self._display.append(nm)
                used.add(nm)
            self._arity[sym] = len(tuple(slot_names)) - 1

        for sym, slot_names in _BUILTIN_SLOTS:
            claim(sym, slot_names)

        def pick_base(sym: str, arity: int) -> str:
            candidates = [sym.upper(), sym]
            while True:
                for base in candidates:
                    names = [base] + [f"{base}{k}" for k in range(1, arity + 1)]
                    if not any(nm in used for nm in names):
                        return base
                candidates = [candidates[-1] + "_"]

        for sym, arity in sig.symbols():
            base = pick_base(sym, arity)
            claim(sym, [base] + [f"{base}{k}" for k in range(1, arity + 1)])
        for mv in METAVARIABLES:
            claim(mv, [pick_base(mv, 0)])

    @property
    def size(self) -> int:
        return len(self._display)

    def vid(self, sym: str, slot: int = 0) -> VarId:
        try:
            return self._vid[(sym, slot)]
        except KeyError:
            raise UnallocatedSymbol(f"no variable for symbol {sym!r} slot {slot}") from None

    def display(self, vid: VarId) -> str:
        return self._display[vid]

    def display_names(self) -> Dict[VarId, str]:
        return dict(enumerate(self._display))

    def vid_by_display(self) -> Dict[str, VarId]:
        return {nm: i for i, nm in enumerate(self._display)}


@dataclass(frozen=True)
class Fingerprint:
    """The encoding of a formula plus one helper matrix per tracked symbol."""

    main: EncMatrix
    helpers: Dict[str, EncMatrix]

    def restrict(self, tracked: Iterable[str]) -> "Fingerprint":
        return Fingerprint(self.main, {k: self.helpers[k] for k in sorted(tracked)})


def encode(f: Formula, alloc: VarAllocation, ring) -> EncMatrix:
    """The matrix of a formula tree."""
    result = elem(alloc.vid(f.root, 0), ring)
    for slot, child in enumerate(f.children, 1):
        result = result + elem(alloc.vid(f.root, slot), ring) * encode(child, alloc, ring)
    return result


def encode_fingerprint(
    f: Formula, alloc: VarAllocation, ring, tracked: Iterable[str]
) -> Fingerprint:
    tracked = sorted(set(tracked))

    def rec(node: Formula):
        main = elem(alloc.vid(node.root, 0), ring)
        if not node.children:
            helpers = {
                t: identity(ring) if t == node.root else zero_matrix(ring)
                for t in tracked
            }
            return main, helpers
        helpers = {t: zero_matrix(ring) for t in tracked}
        for slot, child in enumerate(node.children, 1):
            edge = elem(alloc.vid(node.root, slot), ring)
            child_main, child_helpers = rec(child)
            main = main + edge * child_main
            for t in tracked:
                helpers[t] = helpers[t] + edge * child_helpers[t]
        return main, helpers

    main, helpers = rec(f)
    return Fingerprint(main, helpers)


def hom_mp(fp_hyp: Fingerprint, fp_imp: Fingerprint, alloc: VarAllocation, ring) -> Fingerprint:
    """Fingerprint of the modus-ponens conclusion, from hypothesis and implication.

    Peels the implication node: subtract the vertex matrix and the
    hypothesis branch, then cancel the edge into the conclusion branch.
    No structural check is made; a bad step either fails exact division
    (symbolic ring) or surfaces at the final comparison (field ring).
    """
    if fp_hyp.helpers.keys() != fp_imp.helpers.keys():
        raise UntrackedVariable("fingerprints track different variable sets")
    vertex = elem(alloc.vid(IMPLIES, 0), ring)
    left_edge = elem(alloc.vid(IMPLIES, 1), ring)
    right_var = alloc.vid(IMPLIES, 2)
    main = elem_inv_mul(right_var, fp_imp.main - vertex - left_edge * fp_hyp.main, ring)
    helpers = {
        x: elem_inv_mul(right_var, fp_imp.helpers[x] - left_edge * fp_hyp.helpers[x], ring)
        for x in fp_imp.helpers
    }
    return Fingerprint(main, helpers)


def hom_subst(
    fp_src: Fingerprint, var: str, fp_repl: Fingerprint, alloc: VarAllocation, ring
) -> Fingerprint:
    """Fingerprint of src with every leaf `var` replaced by the repl formula.

    The helper of var collects the path products into the var-leaves, so
    subtracting helper * A(X_var) removes those leaves and adding
    helper * [repl] grafts the replacement onto every one of them.
    """
    if var not in fp_src.helpers or var not in fp_repl.helpers:
        raise UntrackedVariable(f"{var!r} is not tracked")
    if fp_src.helpers.keys() != fp_repl.helpers.keys():
        raise UntrackedVariable("fingerprints track different variable sets")
    leaf = elem(alloc.vid(var, 0), ring)
    hv = fp_src.helpers[var]
    main = fp_src.main - hv * leaf + hv * fp_repl.main
    helpers = {}
    for x in fp_src.helpers:
        if x == var:
            helpers[x] = hv * fp_repl.helpers[x]
        else:
            helpers[x] = fp_src.helpers[x] + hv * fp_repl.helpers[x]
    return Fingerprint(main, helpers)


def degree_bound(f: Formula) -> int:
    """Nodes on the longest root-to-leaf path; bounds every entry degree."""
    return 1 + max((degree_bound(c) for c in f.children), default=0)


def axiom_fingerprint(
    scheme, binding: Dict[str, Formula], alloc: VarAllocation, ring, tracked: Iterable[str]
) -> Fingerprint:
    """Direct encoding of an instantiated axiom scheme."""
    from .logic import instantiate_axiom

    return encode_fingerprint(instantiate_axiom(scheme, binding), alloc, ring, tracked)


def axiom_fingerprint_via_template(
    scheme, binding: Dict[str, Formula], alloc: VarAllocation, ring, tracked: Iterable[str]
) -> Fingerprint:
    """Instantiate an axiom homomorphically from its template fingerprint.

    Encodes the template once over the metavariables, then substitutes
    each binding with hom_subst.  Must agree with the direct route; the
    strict verification mode cross-checks the two on every axiom step.
    """
    scratch = set(tracked) | set(scheme.metavars)
    fp = encode_fingerprint(scheme.template, alloc, ring, scratch)
    for mv in scheme.metavars:
        repl = encode_fingerprint(binding[mv], alloc, ring, scratch)
        fp = hom_subst(fp, mv, repl, alloc, ring)
    return fp.restrict(tracked)
