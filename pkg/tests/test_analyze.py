import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import sample
from oss_forge.analyze import (
    Category,
    TfIdfEmbedder,
    categorize,
    compare_datasets,
    cosine,
    fit_tfidf,
    group_entries,
    load_categories,
    nearest_benchmark,
    token_length_histogram,
    tokenize,
)

FIVE_DOCS = ["the cat sat", "the dog sat down", "a cat and a dog", "Cat_Dog 42", "the end"]

# document frequencies counted by hand from FIVE_DOCS
HAND_DF = {"the": 3, "cat": 3, "sat": 2, "dog": 3, "down": 1, "a": 1, "and": 1, "42": 1, "end": 1}


def hand_idf(df, n=5):
    return math.log((1 + n) / (1 + df)) + 1


class TestTfIdf:
    def test_tokenizer(self):
        assert tokenize("Cat_Dog 42, x-y!") == ["cat", "dog", "42", "x", "y"]

    def test_rarity_ordering(self):
        m = fit_tfidf(["a b", "a"])
        a, b = m.vocabulary["a"], m.vocabulary["b"]
        assert m.idf[b] > m.idf[a]

    def test_single_doc_idf_is_one(self):
        m = fit_tfidf(["x y z x"])
        assert np.all(m.idf == 1.0)

    def test_hand_table(self):
        m = fit_tfidf(FIVE_DOCS)
        assert set(m.vocabulary) == set(HAND_DF)
        assert sorted(m.vocabulary.values()) == list(range(len(HAND_DF)))
        for term, df in HAND_DF.items():
            assert m.idf[m.vocabulary[term]] == pytest.approx(hand_idf(df), abs=1e-12)
        assert m.doc_count == 5 and m.tokenizer_id == "lower-alnum-runs"

    def test_hand_embedding(self):
        m = fit_tfidf(FIVE_DOCS)
        v = m.embed("a cat and a dog")
        w = {"a": 2 * hand_idf(1), "cat": hand_idf(3), "and": hand_idf(1), "dog": hand_idf(3)}
        norm = math.sqrt(sum(x * x for x in w.values()))
        for term, x in w.items():
            assert v[m.vocabulary[term]] == pytest.approx(x / norm, abs=1e-12)

    def test_two_doc_weights(self):
        m = fit_tfidf(["a b", "a"])
        v = m.embed("a a b")
        wa, wb = 2 * 1.0, 1 * (math.log(3 / 2) + 1)
        n = math.hypot(wa, wb)
        assert v[m.vocabulary["a"]] == pytest.approx(wa / n, abs=1e-12)
        assert v[m.vocabulary["b"]] == pytest.approx(wb / n, abs=1e-12)

    def test_unit_norm_and_oov(self):
        m = fit_tfidf(FIVE_DOCS)
        for d in FIVE_DOCS:
            v = m.embed(d)
            assert math.sqrt(sum(x * x for x in v.values())) == pytest.approx(1.0, abs=1e-12)
        assert m.embed("zebra quokka") == {}
        assert cosine(m.embed("zebra"), m.embed("the cat")) == 0.0

    def test_empty_inputs(self):
        with pytest.raises(ValueError):
            fit_tfidf([])
        with pytest.raises(ValueError):
            fit_tfidf(["", "!!!"])

    def test_vocabulary_independent_of_hash_seed(self):
        assert list(fit_tfidf(FIVE_DOCS).vocabulary) == ["the", "cat", "sat", "dog", "down", "a", "and", "42", "end"]

    def test_embed_many_matches_embed(self):
        m = fit_tfidf(FIVE_DOCS)
        mat = m.embed_many(FIVE_DOCS).toarray()
        for row, d in zip(mat, FIVE_DOCS):
            dense = np.zeros(len(m))
            for k, x in m.embed(d).items():
                dense[k] = x
            assert np.array_equal(row, dense)


class TestCosine:
    def test_self(self):
        v = {0: 0.6, 3: 0.8}
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-15)

    def test_disjoint(self):
        assert cosine({0: 1.0}, {1: 1.0}) == 0.0

    def test_three_terms_brute_force(self):
        u = {0: 0.2, 1: 0.5, 2: 0.1}
        v = {1: 0.3, 2: 0.7, 4: 0.9}
        dot = 0.5 * 0.3 + 0.1 * 0.7
        nu = math.sqrt(0.2**2 + 0.5**2 + 0.1**2)
        nv = math.sqrt(0.3**2 + 0.7**2 + 0.9**2)
        assert cosine(u, v) == pytest.approx(dot / (nu * nv), abs=1e-12)

    def test_dense(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 0.0])) == 0.0
        assert cosine(np.array([3.0, 4.0]), np.array([3.0, 4.0])) == pytest.approx(1.0)

    @given(
        st.dictionaries(st.integers(0, 20), st.floats(-10, 10, allow_nan=False), max_size=8),
        st.dictionaries(st.integers(0, 20), st.floats(-10, 10, allow_nan=False), max_size=8),
    )
    def test_symmetric_and_bounded(self, u, v):
        c = cosine(u, v)
        assert c == cosine(v, u)
        assert -1.0 <= c <= 1.0


def exhaustive_nearest(samples, bench):
    """Oracle: dict-based cosine over every pair, first maximum wins."""
    model = fit_tfidf([t for _, t in samples] + [t for _, t in bench])
    bvecs = [model.embed(t) for _, t in bench]
    out = []
    for sid, t in samples:
        v = model.embed(t)
        best_j, best = 0, -1.0
        for j, b in enumerate(bvecs):
            c = sum(v[k] * b[k] for k in v.keys() & b.keys())
            if c > best + 1e-12:
                best_j, best = j, c
        out.append((sid, bench[best_j][0], best))
    return out


class TestNearestBenchmark:
    def test_verbatim_copy_scores_one(self):
        bench = [("HE/0", "sum the even numbers"), ("HE/1", "reverse a string in place")]
        recs, _ = nearest_benchmark([("s", "reverse a string in place")], bench)
        assert recs[0].best_benchmark_entry_id == "HE/1"
        assert recs[0].score == pytest.approx(1.0, abs=1e-12)

    def test_three_by_two_matches_oracle(self):
        bench = [("b0", "parse json config files"), ("b1", "sort numbers with quicksort")]
        samples = [("s0", "quicksort the numbers"), ("s1", "load a json config"), ("s2", "files and numbers")]
        recs, summary = nearest_benchmark(samples, bench)
        oracle = exhaustive_nearest(samples, bench)
        for r, (sid, bid, score) in zip(recs, oracle):
            assert (r.sample_id, r.best_benchmark_entry_id) == (sid, bid)
            assert r.score == pytest.approx(score, abs=1e-12)
        assert summary["count"] == 3
        assert summary["min"] <= summary["p50"] <= summary["max"]

    def test_empty_benchmark_rejected(self):
        with pytest.raises(ValueError):
            nearest_benchmark([("s", "x")], [])

    def test_compare_datasets(self):
        bench = [("b", "add two integers and return the sum")]
        res = compare_datasets({"near": [("a", "add two integers")], "far": [("c", "render a web page")]}, bench)
        assert res["near"]["mean"] > res["far"]["mean"]

    def test_group_entries(self):
        recs = [{"entry_id": "HE/0#docstring", "text": "a"}, {"entry_id": "HE/0#solution", "text": "b"},
                {"entry_id": "HE/1#docstring", "text": "c"}]
        assert group_entries(recs) == [("HE/0", "a\nb"), ("HE/1", "c")]


class TestHistogram:
    def test_single_sample_bin(self):
        h = token_length_histogram([sample("1", "a b c", "x")], bin_width=2)
        assert sum(h.problems) == 1
        assert h.problems[3 // 2] == 1
        assert h.edges[:3] == [0, 2, 4]

    def test_empty_solution_first_bin(self):
        s = sample("1", "p", "x")
        s.solution = ""
        h = token_length_histogram([s], bin_width=10)
        assert h.solutions[0] == 1

    def test_conservation(self):
        rng = random.Random(0)
        samples = [sample(str(i), " ".join("w" * rng.randint(1, 3) for _ in range(rng.randint(1, 300))),
                          " ".join("t" for _ in range(rng.randint(1, 500)))) for i in range(50)]
        h = token_length_histogram(samples, bin_width=25)
        assert sum(h.problems) == 50 and sum(h.solutions) == 50
        assert h.to_csv().splitlines()[0] == "bin_start,bin_end,problems,solutions"

    def test_empty_dataset(self):
        h = token_length_histogram([], bin_width=5)
        assert h.problems == [0] and h.solutions == [0]

    def test_pluggable_counter(self):
        h = token_length_histogram([sample("1", "abcdef", "ab")], tokenizer=len, bin_width=3, tokenizer_id="chars")
        assert h.problems == [0, 0, 1] and h.tokenizer_id == "chars"


class TestCategorize:
    CATS = load_categories()

    def test_bundled_categories(self):
        assert len(self.CATS) == 10
        assert len({c.name for c in self.CATS}) == 10

    def test_wrong_count_rejected(self):
        with pytest.raises(ValueError):
            categorize([], self.CATS[:9])

    def test_self_description_assigned(self):
        c = self.CATS[4]
        s = sample("s", f"{c.name}. {c.description}", "x")
        assert categorize([s], self.CATS).assignment == {"s": 4}

    def test_zero_embedding_tie(self):
        s = sample("s", "!!! ???", "...")
        br = categorize([s], self.CATS)
        assert br.assignment == {"s": 0} and br.ties == 1

    def test_keyword_samples(self):
        # hand-labelled expectations, two per category
        labelled = [
            ("Implement a heap based priority queue and a graph search with dynamic programming", 0),
            ("Sort a linked list and search a binary tree recursively", 0),
            ("Compute matrix determinants and numerical statistics for probability", 1),
            ("Solve the number theory geometry problem with arithmetic", 1),
            ("Write SQL queries with joins over the database tables and indexes", 2),
            ("Design an ORM schema with transactions for the database", 2),
            ("Design the services, interfaces and caching layer with message queues", 3),
            ("Apply design patterns to modules for a distributed system architecture", 3),
            ("Hash passwords and verify authentication tokens with encryption", 4),
            ("Implement authorization checks and secure input validation", 4),
            ("Profile the loop and vectorize it to make the code faster with less memory", 5),
            ("Optimize performance using parallelism and efficient resource usage", 5),
            ("Build a REST API with HTTP routing and request handlers in a web framework", 6),
            ("Serve HTML and CSS from a web server with JavaScript frontend", 6),
            ("Simulate a robotics controller for embedded devices", 7),
            ("Compute finance interest for a biology simulation game", 7),
            ("Create a mobile app with widgets, views and layout for user interaction", 8),
            ("Handle GUI event handling for the graphical user interface", 8),
            ("Clean data frames, plot features and train a neural network model", 9),
            ("Evaluate machine learning metrics after feature engineering and model training", 9),
        ]
        samples = [sample(f"s{i}", text, "pass") for i, (text, _) in enumerate(labelled)]
        br = categorize(samples, self.CATS)
        hits = sum(br.assignment[f"s{i}"] == want for i, (_, want) in enumerate(labelled))
        assert hits / len(labelled) >= 0.9
        assert sum(br.counts) == 20

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0.01, 1e3), min_size=6, max_size=6), st.integers(0, 2**32))
    def test_scale_invariance(self, scales, rs):
        rng = np.random.default_rng(rs)
        raw_cats = rng.normal(size=(10, 5))
        raw_samples = rng.normal(size=(6, 5))

        class Fixed:
            embedder_id = "fixed"

            def __init__(self, s):
                self.s = s

            def embed(self, texts):
                if texts and texts[0].startswith("c"):
                    return raw_cats
                return raw_samples * np.asarray(self.s)[:, None]

        cats = [Category(f"c{i}", "") for i in range(10)]
        samples = [sample(f"s{i}", f"s{i}", "x") for i in range(6)]
        base = categorize(samples, cats, Fixed([1.0] * 6)).assignment
        assert categorize(samples, cats, Fixed(scales)).assignment == base

    def test_embedder_failure_raises(self):
        class Broken:
            embedder_id = "broken"

            def embed(self, texts):
                from oss_forge.analyze import EmbedderError
                raise EmbedderError("down")

        from oss_forge.analyze import EmbedderError
        with pytest.raises(EmbedderError):
            categorize([sample("s", "x", "y")], self.CATS, Broken())

    def test_tfidf_embedder_requires_fit(self):
        from oss_forge.analyze import EmbedderError
        with pytest.raises(EmbedderError):
            TfIdfEmbedder().embed(["x"])
