import random

import pytest

from degreelab.baire_model import SpaceSpec, identity_problem, make_problem
from degreelab.calculus import WitnessClass
from degreelab.suites import cons3_clone, kleene6_clone, random_problem

B1 = SpaceSpec(2, 1)
B2 = SpaceSpec(2, 2)


@pytest.fixture(scope="session")
def cons3():
    return WitnessClass.of_clone(cons3_clone())


@pytest.fixture(scope="session")
def kleene6():
    return WitnessClass.of_clone(kleene6_clone())


@pytest.fixture
def id1():
    return identity_problem(B1)


def rand_problem(seed, sp=B2, osp=None, name="P"):
    return random_problem(random.Random(seed), sp, osp or sp, name=name)
