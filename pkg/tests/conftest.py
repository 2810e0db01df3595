import random

import pytest

from perfect_delaunay.services.catalog_service import Catalog, expand_record, load_catalog

# a complete one-record catalog
SEGMENT_TEXT = """\
[polytope "seg"]
dim = 1
gram =
  1
center = 1/2 * (1)
radius2 = 1/4
# left end
orbit = "[0] × 1"
orbit = "[1] × 1"
expected.vertex_count = 2
expected.iso_order = 2
expected.lattice_aut_order = 2
expected.symmetric_subgroup_k = 1
expected.shortest_count = 2
expected.quadinv_dim = 1
expected.spectrum = 1
expected.lamina = 2
expected.symmetry_type = centrally-symmetric
note = "radius2: exact"
"""


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return load_catalog()


@pytest.fixture(scope="session")
def polytope(catalog):
    """polytope("G6") -> (record, expanded vertices)"""
    cache = {}

    def get(record_id: str):
        if record_id not in cache:
            record = catalog.get(record_id)
            cache[record_id] = (record, expand_record(record))
        return cache[record_id]

    return get


@pytest.fixture
def segment_text() -> str:
    return SEGMENT_TEXT


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
