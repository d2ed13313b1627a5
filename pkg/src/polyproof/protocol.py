"""The probabilistic verification procedure and its exact symbolic twin.

A proof script is replayed twice over the same random point of the field:

  * alpha1 is the evaluated encoding of the declared goal, computed
    directly from the goal formula;
  * alpha2 is propagated from the axiom fingerprints through the
    homomorphic modus-ponens and substitution operators, without ever
    looking at the intermediate formulas.

The run accepts exactly when alpha1 == alpha2.  A wrong proof can only
be accepted when the entrywise difference of two distinct polynomial
matrices vanishes at the sampled point, which happens with probability
at most d / (p - 2) per repeat, d being the largest formula depth in the
proof (points are drawn from the p - 2 values outside {0, 1}).

``verify_symbolic`` runs the same propagation over exact polynomials and
accepts only on polynomial identity; it is the ground truth the field
mode is tested against, feasible for small proofs.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .encmat import EncMatrix, FieldRing, SymbolicRing
from .ffield import FieldElem, PointSampler, PrimeField
from .fingerprint import (
    Fingerprint,
    VarAllocation,
    axiom_fingerprint,
    axiom_fingerprint_via_template,
    degree_bound,
    encode,
    encode_fingerprint,
    hom_mp,
    hom_subst,
)
from .logic import (
    AXIOM_SCHEMES,
    IMPLIES,
    METAVARIABLES,
    AxiomStep,
    MPStep,
    ProofScript,
    SubstStep,
    atoms_of,
    instantiate_axiom,
    step_formulas,
)
from .mpoly import NotDivisible, VarId


class StrictCheckError(Exception):
    """Direct and template-derived axiom fingerprints disagree."""


@dataclass
class Assignment:
    """Field values for every allocated polynomial variable.

    Values are always in [2, p): 0 would make elementary matrices
    singular and 1 is excluded from the sampling domain as well.
    """

    field: PrimeField
    values: Dict[VarId, FieldElem]
    provenance: str

    @classmethod
    def from_seed(cls, seed: bytes, field: PrimeField, alloc: VarAllocation) -> "Assignment":
        sampler = PointSampler(seed, field)
        values = {vid: sampler.next() for vid in range(alloc.size)}
        return cls(field, values, f"seed {seed.hex()}")

    @classmethod
    def from_file_text(
        cls, text: str, alloc: VarAllocation, label: str = "<text>"
    ) -> "Assignment":
        field = None
        values: Dict[VarId, FieldElem] = {}
        by_name = alloc.vid_by_display()
        for line_no, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            m = re.fullmatch(r"(\S+)\s*=\s*(\d+)", line)
            if not m:
                raise ValueError(f"assignment line {line_no}: malformed {raw!r}")
            name, number = m.group(1), int(m.group(2))
            if name == "prime":
                if field is not None:
                    raise ValueError(f"assignment line {line_no}: duplicate prime")
                field = PrimeField(number)
                continue
            if field is None:
                raise ValueError("assignment file must start with: prime = <decimal>")
            if name not in by_name:
                raise ValueError(f"assignment line {line_no}: unknown variable {name!r}")
            vid = by_name[name]
            if vid in values:
                raise ValueError(f"assignment line {line_no}: duplicate value for {name}")
            if not 2 <= number < field.p:
                raise ValueError(
                    f"assignment line {line_no}: {name} = {number} outside [2, {field.p})"
                )
            values[vid] = field.elem(number)
        if field is None:
            raise ValueError("assignment file must declare a prime")
        return cls(field, values, f"assignment-file {label}")

    def render(self, alloc: VarAllocation) -> str:
        lines = [f"prime = {self.field.p}"]
        for vid in sorted(self.values):
            lines.append(f"{alloc.display(vid)} = {self.values[vid].value}")
        return "\n".join(lines) + "\n"

    def ensure_covers(self, vids) -> None:
        missing = [v for v in vids if v not in self.values]
        if missing:
            raise ValueError(f"assignment lacks values for variable ids {missing}")

    def ring(self) -> FieldRing:
        return FieldRing(self.field, self.values)


@dataclass
class StepRecord:
    index: int
    kind: str
    fingerprint: Fingerprint


@dataclass
class Run:
    """One replay of the script at one evaluation point."""

    assignment: Assignment
    records: List[StepRecord]
    alpha1: EncMatrix
    alpha2: EncMatrix

    @property
    def accepted(self) -> bool:
        return self.alpha1 == self.alpha2


@dataclass
class Transcript:
    proof_name: str
    field: PrimeField
    provenance: str
    repeats: int
    d_bound: int
    epsilon: Fraction
    runs: List[Run]
    alloc: VarAllocation

    @property
    def verdict(self) -> str:
        return "accept" if all(run.accepted for run in self.runs) else "reject"

    def render(self) -> str:
        lines = [
            f"proof {self.proof_name}",
            f"prime {self.field.p}",
            self.provenance,
            f"repeats {self.repeats}",
            f"d-bound {self.d_bound}",
            f"epsilon {self.epsilon}",
        ]
        for r, run in enumerate(self.runs, 1):
            if self.repeats > 1:
                lines.append(f"repeat {r}")
            for rec in run.records:
                helpers = ", ".join(
                    f"{name}:{_fmt_matrix(mat)}"
                    for name, mat in sorted(rec.fingerprint.helpers.items())
                )
                lines.append(
                    f"step {rec.index} {rec.kind} "
                    f"main={_fmt_matrix(rec.fingerprint.main)} helpers={{{helpers}}}"
                )
            if self.repeats > 1:
                lines.append(
                    f"alpha1={_fmt_matrix(run.alpha1)} alpha2={_fmt_matrix(run.alpha2)}"
                )
        first = self.runs[0]
        lines.append(
            f"alpha1={_fmt_matrix(first.alpha1)} alpha2={_fmt_matrix(first.alpha2)} "
            f"verdict={self.verdict}"
        )
        return "\n".join(lines) + "\n"


@dataclass
class SymbolicReport:
    """Outcome of the exact polynomial replay."""

    accepted: bool
    alpha1: Optional[EncMatrix]
    alpha2: Optional[EncMatrix]
    records: List[StepRecord]
    failure: Optional[str] = None

    @property
    def verdict(self) -> str:
        return "accept" if self.accepted else "reject"


def tracked_atoms(script: ProofScript) -> List[str]:
    """All arity-0 symbols appearing in the script's formulas."""
    names = set(atoms_of(script.goal))
    for step in script.steps:
        if isinstance(step, AxiomStep):
            for f in step.binding.values():
                names |= atoms_of(f)
        elif isinstance(step, SubstStep):
            names.add(step.var)
            if step.replacement is not None:
                names |= atoms_of(step.replacement)
    return sorted(names)


def proof_degree_bound(script: ProofScript) -> int:
    """Largest formula depth occurring in the proof.

    Uses the syntactic replay to include derived formulas (substitution
    can deepen them); for scripts whose replay breaks, falls back to the
    formulas that appear literally.
    """
    formulas = [script.goal]
    for step in script.steps:
        if isinstance(step, AxiomStep):
            formulas.append(instantiate_axiom(AXIOM_SCHEMES[step.scheme], step.binding))
        elif isinstance(step, SubstStep) and step.replacement is not None:
            formulas.append(step.replacement)
    formulas.extend(step_formulas(script, partial=True))
    return max(degree_bound(f) for f in formulas)


def propagate(script: ProofScript, alloc: VarAllocation, ring, tracked, *, strict: bool = False):
    """Replay the proof steps over the given ring; returns (records, fingerprints)."""
    fps: List[Fingerprint] = []
    records: List[StepRecord] = []
    for idx, step in enumerate(script.steps, 1):
        if isinstance(step, AxiomStep):
            scheme = AXIOM_SCHEMES[step.scheme]
            fp = axiom_fingerprint(scheme, step.binding, alloc, ring, tracked)
            if strict:
                fp2 = axiom_fingerprint_via_template(scheme, step.binding, alloc, ring, tracked)
                if fp != fp2:
                    raise StrictCheckError(
                        f"step {idx}: template-derived axiom fingerprint disagrees"
                    )
        elif isinstance(step, MPStep):
            fp = hom_mp(fps[step.hyp - 1], fps[step.imp - 1], alloc, ring)
        else:
            if step.replacement is not None:
                repl = encode_fingerprint(step.replacement, alloc, ring, tracked)
            else:
                repl = fps[step.replacement_step - 1]
            fp = hom_subst(fps[step.source - 1], step.var, repl, alloc, ring)
        fps.append(fp)
        records.append(StepRecord(idx, step.kind, fp))
    return records, fps


def prove(script: ProofScript, assignment: Assignment, *, strict: bool = False) -> Transcript:
    """Single-run verification under an explicitly given assignment."""
    alloc = VarAllocation(script.signature)
    run = _field_run(script, assignment, alloc, strict=strict)
    d = proof_degree_bound(script)
    return Transcript(
        proof_name=script.name,
        field=assignment.field,
        provenance=assignment.provenance,
        repeats=1,
        d_bound=d,
        epsilon=_epsilon(d, assignment.field.p, 1),
        runs=[run],
        alloc=alloc,
    )


def verify(
    script: ProofScript,
    seed: bytes,
    repeats: int,
    field: PrimeField,
    *,
    strict: bool = False,
) -> Transcript:
    """Seeded verification with independent repeats.

    Repeat r uses the sub-seed SHA-256(seed || r as 4 big-endian bytes),
    so transcripts are a pure function of (script, seed, p, repeats).
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if len(seed) != 32:
        raise ValueError("seed must be exactly 32 bytes")
    alloc = VarAllocation(script.signature)
    runs = []
    for r in range(1, repeats + 1):
        sub_seed = hashlib.sha256(seed + r.to_bytes(4, "big")).digest()
        assignment = Assignment.from_seed(sub_seed, field, alloc)
        runs.append(_field_run(script, assignment, alloc, strict=strict))
    d = proof_degree_bound(script)
    return Transcript(
        proof_name=script.name,
        field=field,
        provenance=f"seed {seed.hex()}",
        repeats=repeats,
        d_bound=d,
        epsilon=_epsilon(d, field.p, repeats),
        runs=runs,
        alloc=alloc,
    )


def verify_symbolic(script: ProofScript, *, strict: bool = False) -> SymbolicReport:
    """Exact verification: the propagated and direct polynomial matrices
    must be identical.  Failed exact divisions mean a malformed step and
    reject the script."""
    alloc = VarAllocation(script.signature)
    ring = SymbolicRing()
    tracked = tracked_atoms(script)
    try:
        records, fps = propagate(script, alloc, ring, tracked, strict=strict)
    except NotDivisible as exc:
        return SymbolicReport(False, None, None, [], failure=f"malformed step: {exc}")
    alpha1 = encode(script.goal, alloc, ring)
    alpha2 = fps[script.qed - 1].main
    return SymbolicReport(alpha1 == alpha2, alpha1, alpha2, records)


def _field_run(script, assignment, alloc, *, strict: bool) -> Run:
    assignment.ensure_covers(_needed_vids(script, alloc, strict=strict))
    ring = assignment.ring()
    tracked = tracked_atoms(script)
    records, fps = propagate(script, alloc, ring, tracked, strict=strict)
    alpha1 = encode(script.goal, alloc, ring)
    alpha2 = fps[script.qed - 1].main
    return Run(assignment, records, alpha1, alpha2)


def _needed_vids(script: ProofScript, alloc: VarAllocation, *, strict: bool):
    """Variable ids the replay will touch (all slots of every used symbol)."""
    symbols = set(atoms_of(script.goal))
    formulas = [script.goal]
    for step in script.steps:
        if isinstance(step, AxiomStep):
            formulas.append(instantiate_axiom(AXIOM_SCHEMES[step.scheme], step.binding))
        elif isinstance(step, SubstStep):
            symbols.add(step.var)
            if step.replacement is not None:
                formulas.append(step.replacement)

    def walk(f):
        symbols.add(f.root)
        for c in f.children:
            walk(c)

    for f in formulas:
        walk(f)
    symbols.add(IMPLIES)
    if strict:
        symbols.update(METAVARIABLES)
    vids = []
    for sym in symbols:
        arity = script.signature.arity(sym) if script.signature.has(sym) else 0
        vids.extend(alloc.vid(sym, slot) for slot in range(arity + 1))
    return sorted(vids)


def _epsilon(d: int, p: int, repeats: int) -> Fraction:
    per_run = min(Fraction(1), Fraction(d, p - 2))
    return per_run**repeats


def _fmt_matrix(m: EncMatrix) -> str:
    if isinstance(m.a, FieldElem):
        return f"[{m.a.value}, {m.b.value}, {m.d.value}]"
    return f"[{m.a.render()}; {m.b.render()}; {m.d.render()}]"
