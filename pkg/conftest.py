import copy
import json
import os
import random

import pytest

from buildings.chart_complex import validate
from buildings.model_space import ModelSpace
from buildings.root_systems import build
from buildings.serialization import atlas_from_document

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def _load(name):
    with open(os.path.join(DATA_DIR, name), "r", encoding="utf-8") as f:
        return json.load(f)


def _zero(group_rank):
    return ["0/1"] * group_rank


def tripod_doc(group_rank=2):
    """Three legs glued at the origin; chart A holds legs 1 and 2, B legs 1 and 3, C legs 2 and 3."""
    document = _load("tripod.json")
    document["group_rank"] = group_rank
    for gluing in document["gluings"]:
        for constraint in gluing["region"]:
            constraint["offset"] = _zero(group_rank)
        gluing["weyl"]["translation"] = [_zero(group_rank)]
    return document


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def tripod_document():
    return tripod_doc(2)


@pytest.fixture
def make_tripod_document():
    return tripod_doc


@pytest.fixture
def tripod():
    return validate(atlas_from_document(tripod_doc(2)))


@pytest.fixture
def tripod_q():
    return validate(atlas_from_document(tripod_doc(1)))


@pytest.fixture
def witnesses_document():
    return _load("tripod-witnesses.json")


@pytest.fixture
def rotation_document():
    return _load("tripod-rotation.json")


@pytest.fixture
def a2_document():
    return _load("a2-apartment.json")


@pytest.fixture
def mutate():
    """Deep copy of an atlas document, edited by the callback."""

    def apply(document, edit):
        changed = copy.deepcopy(document)
        edit(changed)
        return changed

    return apply


@pytest.fixture
def a1q():
    return ModelSpace(build("A", 1), 1)


@pytest.fixture
def a1q2():
    return ModelSpace(build("A", 1), 2)


@pytest.fixture
def a2q():
    return ModelSpace(build("A", 2), 1)


@pytest.fixture
def a2q2():
    return ModelSpace(build("A", 2), 2)


@pytest.fixture
def rng(request):
    return random.Random(request.node.name)
