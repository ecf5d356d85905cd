
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import sample
from oss_forge.clean import clean
from oss_forge.corpus import is_trivial_seed


def test_exact_duplicate():
    s1 = sample("1", "P", "S", "a = 1")
    s1_copy = sample("2", "P", "S", "b = 2")
    kept, rep = clean([s1, s1_copy])
    assert [s.sample_id for s in kept] == ["1"]
    assert rep.removed_exact_dup == 1 and rep.reconciles()


def test_shared_seed():
    kept, rep = clean([sample("1", "P1", "S1", "x = 1"), sample("2", "P2", "S2", "x = 1")])
    assert [s.sample_id for s in kept] == ["1"]
    assert rep.removed_seed_dup == 1


def test_trivial_seed():
    bad = sample("1", "P", "S", "# just a comment\n\n# another")
    assert is_trivial_seed(bad.seed)
    kept, rep = clean([bad, sample("2", "P2", "S2", "y = 2")])
    assert [s.sample_id for s in kept] == ["2"]
    assert rep.removed_trivial_seed == 1


def test_precedence_counts_each_once():
    # an exact duplicate that also shares a trivial seed is charged to the first rule only
    a = sample("a", "P", "S", "# c")
    b = sample("b", "P", "S", "# c")
    kept, rep = clean([a, b])
    assert kept == []
    assert (rep.removed_exact_dup, rep.removed_seed_dup, rep.removed_trivial_seed) == (1, 0, 1)
    assert rep.reconciles()


def test_formatting_of_raw_response_ignored():
    a = sample("a", "P", "S", "x=1")
    b = sample("b", "P", "S", "y=2")
    b.raw_response = "   totally different raw text"
    assert clean([a, b])[1].removed_exact_dup == 1


def test_empty_input():
    kept, rep = clean([])
    assert kept == [] and rep.to_dict() == {
        "input_count": 0, "removed_exact_dup": 0, "removed_seed_dup": 0,
        "removed_trivial_seed": 0, "output_count": 0,
    }


def test_pair_mined_samples_skip_seed_rules():
    a = sample("a", "P", "S", None)
    b = sample("b", "P2", "S2", None)
    assert len(clean([a, b])[0]) == 2


_texts = st.sampled_from(["P1", "P2", "P3"])
_seeds = st.sampled_from(["x = 1", "y = 2", "# c", "", "z()"])


@st.composite
def sample_lists(draw):
    n = draw(st.integers(0, 25))
    return [sample(str(i), draw(_texts), draw(_texts), draw(_seeds)) for i in range(n)]


@settings(max_examples=200, deadline=None)
@given(sample_lists())
def test_properties(samples):
    kept, rep = clean(samples)
    assert rep.reconciles()
    assert rep.input_count == len(samples)
    again, rep2 = clean(kept)
    assert rep2.removed == 0 and [s.sample_id for s in again] == [s.sample_id for s in kept]
    ids = [s.sample_id for s in samples]
    kept_ids = set(s.sample_id for s in kept)
    assert [s.sample_id for s in kept] == [i for i in ids if i in kept_ids]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(_texts, _seeds), max_size=20), st.randoms())
def test_survivor_count_invariant_for_seed_rules(rows, rnd):
    # distinct (problem, solution) everywhere, so only seed rules fire
    samples = [sample(str(i), f"{p}-{i}", "S", sd) for i, (p, sd) in enumerate(rows)]
    base = clean(samples)[1].output_count
    rnd.shuffle(samples)
    assert clean(samples)[1].output_count == base


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(_texts, _texts), max_size=20), st.randoms())
def test_survivor_count_invariant_for_exact_rule(rows, rnd):
    # distinct non-trivial seeds everywhere, so only the exact rule fires
    samples = [sample(str(i), p, s, f"v{i} = {i}") for i, (p, s) in enumerate(rows)]
    base = clean(samples)[1].output_count
    rnd.shuffle(samples)
    assert clean(samples)[1].output_count == base


def test_survivor_count_depends_on_order_when_rules_interact():
    a = sample("A", "P", "S", "x = 1")
    b = sample("B", "P", "S", "y = 2")
    c = sample("C", "Q", "T", "y = 2")
    assert clean([a, b, c])[1].output_count == 2
    assert clean([b, a, c])[1].output_count == 1
