import random
from pathlib import Path

import pytest
from hypothesis import settings

from polyproof.logic import Formula, Signature, atom, imp, neg

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

PROOF_DIR = Path(__file__).resolve().parent.parent / "proofs"

SEED0 = bytes(32)
SEED1 = bytes(31) + b"\x01"


def load_proof_text(name: str) -> str:
    return (PROOF_DIR / f"{name}.proof").read_text()


def random_formula(rng: random.Random, max_depth: int, atoms=("x", "y", "z")) -> Formula:
    """Uniform-ish random formula over !, -> and the given atoms."""
    if max_depth <= 1:
        return atom(rng.choice(atoms))
    roll = rng.random()
    if roll < 0.35:
        return atom(rng.choice(atoms))
    if roll < 0.6:
        return neg(random_formula(rng, max_depth - 1, atoms))
    return imp(
        random_formula(rng, max_depth - 1, atoms),
        random_formula(rng, max_depth - 1, atoms),
    )


@pytest.fixture
def xyz_signature():
    sig = Signature()
    for name in ("x", "y", "z"):
        sig.declare(name, 0)
    return sig
