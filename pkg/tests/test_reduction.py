"""Multiple-choice subset sum -> UFP reduction.

Two pinned instances anchor everything. The one-set instance {1/4} with
target 1/4 reproduces the worked constants (W 7/4, Q 9/2, L 3, H 9) and
threshold 35, met exactly. The two-set instance {1/8, 1/16} x {1/8, 1/16}
with target 3/16 is a yes-instance only at index sum 3, and the image
optima were computed by the exact oracle: 1575, 1893, 1895 against
thresholds 1890, 1893, 1896. Note the near miss at x = 4: the best
misaligned packing lands one unit under the threshold, which is the
whole point of the weight tiers.
"""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ufpkit.model import InstanceError, Subpath, total_weight
from ufpkit.oracle import exact_ufp
from ufpkit.reduction import (
    SsmInstance,
    build_ufp_instance,
    decide_ssm_bruteforce,
    decide_ssm_via_ufp,
    normalize_ssm,
    parse_ssm,
    profit_threshold,
    reduction_params,
    serialize_ssm,
    task_role,
)

ONE_SET = SsmInstance(sets=((Fraction(1, 4),),), target=Fraction(1, 4))
TWO_SET_YES = SsmInstance(
    sets=((Fraction(1, 8), Fraction(1, 16)), (Fraction(1, 8), Fraction(1, 16))),
    target=Fraction(3, 16),
)
TWO_SET_NO = SsmInstance(
    sets=TWO_SET_YES.sets,
    target=Fraction(61, 320),  # between the reachable sums 3/16 and 1/4
)


# ---------------------------------------------------------------- validation

def test_ssm_validation():
    with pytest.raises(InstanceError):
        SsmInstance(sets=(), target=1)
    with pytest.raises(InstanceError):
        SsmInstance(sets=((Fraction(1, 4), Fraction(1, 8)), (Fraction(1, 4),)), target=Fraction(1, 4))
    with pytest.raises(InstanceError):
        SsmInstance(sets=((Fraction(-1, 4),),), target=Fraction(1, 4))
    with pytest.raises(InstanceError):
        SsmInstance(sets=((Fraction(1, 2),),), target=Fraction(1, 4))  # at the 2B/k bound
    with pytest.raises(InstanceError):
        SsmInstance(sets=((Fraction(1, 4),),), target=Fraction(3, 8))  # slack reaches 1
    with pytest.raises(InstanceError):
        SsmInstance(sets=((Fraction(1, 4),),), target=0)


# ---------------------------------------------------------------- parameters

def test_params_one_set():
    p = reduction_params(ONE_SET)
    assert (p.r, p.W, p.Q) == (Fraction(3, 4), Fraction(7, 4), Fraction(9, 2))
    assert (p.L, p.H, p.m) == (3, 9, 3)


def test_params_two_set():
    p = reduction_params(TWO_SET_YES)
    assert p.r == Fraction(3, 4)
    assert p.W == Fraction(7, 4)
    assert p.Q == Fraction(39, 4)
    assert (p.L, p.H, p.m) == (33, 281, 5)


def test_image_one_set():
    inst = build_ufp_instance(ONE_SET, 1)
    assert inst.m == 3
    assert inst.capacities == (Fraction(13, 2), 7, Fraction(13, 2))
    got = [(t.id, (t.path.first, t.path.last), t.demand, t.weight) for t in inst.tasks]
    assert got == [
        (1, (1, 1), Fraction(13, 2), 13),
        (2, (3, 3), Fraction(13, 2), 13),
        (3, (2, 2), Fraction(9, 2), 9),
    ]


def test_image_two_set_shape():
    inst = build_ufp_instance(TWO_SET_YES, 3)
    assert inst.m == 5 and inst.n == 10
    # z tasks nest into the left checkpoints, q tasks into the right
    assert inst.task(1).path == Subpath(1, 1)
    assert inst.task(3).path == Subpath(1, 3)
    assert inst.task(5).path == Subpath(3, 5)
    assert inst.task(7).path == Subpath(5, 5)
    assert inst.task(9).path == Subpath(2, 2)
    assert inst.task(10).path == Subpath(4, 4)


def test_task_roles():
    assert task_role(TWO_SET_YES, 1) == "z[set=1,index=1]"
    assert task_role(TWO_SET_YES, 4) == "z[set=2,index=2]"
    assert task_role(TWO_SET_YES, 5) == "q[set=1,index=1]"
    assert task_role(TWO_SET_YES, 8) == "q[set=2,index=2]"
    assert task_role(TWO_SET_YES, 10) == "lane[set=2]"
    with pytest.raises(InstanceError):
        task_role(TWO_SET_YES, 11)


def test_index_sum_range_checked():
    with pytest.raises(InstanceError):
        build_ufp_instance(TWO_SET_YES, 1)
    with pytest.raises(InstanceError):
        build_ufp_instance(TWO_SET_YES, 5)


# ---------------------------------------------------------------- thresholds

def test_thresholds():
    assert profit_threshold(ONE_SET, 1) == 35
    assert [profit_threshold(TWO_SET_YES, x) for x in (2, 3, 4)] == [1890, 1893, 1896]


def test_one_set_optimum_meets_threshold():
    res = exact_ufp(build_ufp_instance(ONE_SET, 1))
    assert res.value == 35
    assert tuple(res.witness) == (1, 2, 3)


def test_two_set_optima_frozen():
    optima = {x: exact_ufp(build_ufp_instance(TWO_SET_YES, x)).value for x in (2, 3, 4)}
    assert optima == {2: 1575, 3: 1893, 4: 1895}


def test_two_set_aligned_witness():
    # selection (1, 2): 1/8 + 1/16 = 3/16 with index sum 3
    image = build_ufp_instance(TWO_SET_YES, 3)
    aligned = (1, 4, 5, 8, 9, 10)  # z[1,1], z[2,2], q[1,1], q[2,2], both lanes
    assert total_weight(image, aligned) == profit_threshold(TWO_SET_YES, 3)
    assert tuple(exact_ufp(image).witness) == aligned


# ---------------------------------------------------------------- deciders

def test_deciders_on_pinned_instances():
    assert decide_ssm_bruteforce(TWO_SET_YES) == (True, (1, 2))
    assert decide_ssm_via_ufp(TWO_SET_YES) is True
    assert decide_ssm_bruteforce(TWO_SET_NO) == (False, None)
    assert decide_ssm_via_ufp(TWO_SET_NO) is False
    assert decide_ssm_bruteforce(ONE_SET) == (True, (1,))
    assert decide_ssm_via_ufp(ONE_SET) is True


def test_bruteforce_limit():
    with pytest.raises(ValueError):
        decide_ssm_bruteforce(TWO_SET_YES, limit=3)


# ---------------------------------------------------------------- normalize

def test_normalize_pins_slack():
    ssm = normalize_ssm(((-3, 5), (2, -1)), 4)
    assert 2 * ssm.target + sum(a for row in ssm.sets for a in row) == Fraction(1, 2)
    assert all(0 < a < 2 * ssm.target / ssm.k for row in ssm.sets for a in row)
    # -3 + ... no; 5 + (-1) = 4: still a yes-instance after normalizing
    assert decide_ssm_bruteforce(ssm) == (True, (2, 2))
    assert decide_ssm_via_ufp(ssm) is True


def test_normalize_preserves_no():
    ssm = normalize_ssm(((-3, 5), (2, -1)), 6)  # sums are -1, -4, 7, 4
    assert decide_ssm_bruteforce(ssm) == (False, None)
    assert decide_ssm_via_ufp(ssm) is False


def test_normalize_shape_errors():
    with pytest.raises(InstanceError):
        normalize_ssm((), 1)
    with pytest.raises(InstanceError):
        normalize_ssm(((1, 2), (3,)), 1)


# ---------------------------------------------------------------- text format

SSM_TEXT = """\
# two-set demo
k 2
n 2
set 1 1/8 1/16
set 2 1/8 1/16
target 3/16
"""


def test_parse_ssm_roundtrip():
    sets, target = parse_ssm(SSM_TEXT)
    assert SsmInstance(sets=sets, target=target) == TWO_SET_YES
    assert parse_ssm(serialize_ssm(sets, target)) == (sets, target)


@pytest.mark.parametrize(
    "text, phrase",
    [
        ("set 1 1\nk 1\nn 1\ntarget 1\n", "before"),
        ("k 1\nn 1\nset 1 1 2\ntarget 1\n", "takes"),
        ("k 1\nn 1\nset 2 1\ntarget 1\n", "outside"),
        ("k 1\nn 1\nset 1 1\nset 1 1\ntarget 1\n", "duplicate"),
        ("k 2\nn 1\nset 1 1\ntarget 1\n", "missing"),
        ("k 1\nn 1\nset 1 1\n", "missing"),
        ("k 1\nn 1\nfrob\ntarget 1\n", "frob"),
    ],
)
def test_parse_ssm_errors(text, phrase):
    with pytest.raises(InstanceError) as err:
        parse_ssm(text)
    assert phrase in str(err.value)


# ---------------------------------------------------------------- properties

@st.composite
def raw_ssms(draw):
    k = draw(st.integers(1, 2))
    n = draw(st.integers(1, 2))
    rows = tuple(
        tuple(draw(st.integers(1, 6)) for _ in range(n)) for _ in range(k)
    )
    target = draw(st.integers(1, 12))
    return rows, target


@settings(max_examples=15, deadline=None)
@given(raw_ssms())
def test_image_optimum_characterizes_answers_per_index_sum(raw):
    rows, target = raw
    ssm = normalize_ssm(rows, target)
    k, n = ssm.k, ssm.n
    for x in range(k, k * n + 1):
        threshold = profit_threshold(ssm, x)
        opt = exact_ufp(build_ufp_instance(ssm, x)).value
        yes_at_x = any(
            sum(choice) == x
            and sum(ssm.sets[i][choice[i] - 1] for i in range(k)) == ssm.target
            for choice in itertools.product(range(1, n + 1), repeat=k)
        )
        assert opt <= threshold
        assert (opt == threshold) == yes_at_x


@settings(max_examples=15, deadline=None)
@given(raw_ssms())
def test_deciders_agree(raw):
    rows, target = raw
    ssm = normalize_ssm(rows, target)
    brute, witness = decide_ssm_bruteforce(ssm)
    assert decide_ssm_via_ufp(ssm) is brute
    if brute:
        assert sum(ssm.sets[i][witness[i] - 1] for i in range(ssm.k)) == ssm.target
