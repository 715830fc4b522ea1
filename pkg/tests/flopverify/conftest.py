"""
Shared fixtures for the flopverify test suite.

Loading a case runs its consistency checks, so loaded cases are shared per
session; tests must not mutate them.
"""

import pytest

from flopverify.domain.flop_catalog import load_case


@pytest.fixture(scope="session")
def c2_case():
    """Fixture providing the C2 flop case."""
    return load_case("C2")


@pytest.fixture(scope="session")
def ag4_case():
    """Fixture providing the AG4 flop case with a narrow lemma window."""
    return load_case("AG4", lemma_window=1)


@pytest.fixture(scope="session")
def mukai3_case():
    """Fixture providing Mukai(3)."""
    return load_case("Mukai", 3)
