import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import PY_MODULE, seed
from oss_forge.corpus import document_lines
from oss_forge.pairminer import (
    CommentFunctionPair,
    MiningOptions,
    MiningStats,
    UnparseableDocument,
    mask_python,
    mine_pairs,
    pairs_to_samples,
    prioritize_pairs,
    problem_code,
)
from oss_forge.records import CodeDocument


def doc(content, doc_id="d", language="python"):
    return CodeDocument(doc_id, language, content, "test")


def resliced(pair, content):
    lines = document_lines(content)
    return "\n".join(lines[pair.span[0] - 1 : pair.span[1]])


class TestMining:
    def test_three_documented_two_undocumented(self):
        pairs = mine_pairs([doc(PY_MODULE)])
        assert [p.signature.strip().split("(")[0] for p in pairs] == ["def area", "def scale", "def volume"]
        assert [p.span for p in pairs] == [(4, 7), (14, 22), (29, 33)]
        for p in pairs:
            assert resliced(p, PY_MODULE) == p.region_text()

    def test_fields(self):
        area = mine_pairs([doc(PY_MODULE)])[0]
        assert area.signature == "def area(radius):"
        assert area.comment == '    """Return the area of a circle with the given radius."""'
        assert area.body == "    r2 = radius * radius\n    return math.pi * r2"

    def test_multiline_signature(self):
        vol = mine_pairs([doc(PY_MODULE)])[2]
        assert vol.signature == "    def volume(self, w,\n               h, d):"

    def test_nested_function_mined(self):
        src = (
            "def outer(x):\n"
            '    """Outer function docstring is here."""\n'
            "    def inner(y):\n"
            '        """Inner function docstring is here."""\n'
            "        z = y + 1\n"
            "        return z\n"
            "    return inner(x)\n"
        )
        pairs = mine_pairs([doc(src)])
        assert [p.span for p in pairs] == [(1, 7), (3, 6)]
        for p in pairs:
            assert resliced(p, src) == p.region_text()

    def test_def_inside_docstring_ignored(self):
        src = (
            "def real(a):\n"
            '    """Example usage follows below.\n'
            "\n"
            "    def fake(b):\n"
            "        '''not a function'''\n"
            '    """\n'
            "    b = a * 2\n"
            "    return b\n"
        )
        pairs = mine_pairs([doc(src)])
        assert len(pairs) == 1 and pairs[0].span == (1, 8)

    def test_one_line_def_and_short_bodies_skipped(self):
        src = (
            'def f(x): return x\n\n'
            "def g(x):\n"
            '    """Docstring with enough words."""\n'
            "    return x\n"
        )
        assert mine_pairs([doc(src)]) == []
        assert len(mine_pairs([doc(src)], options=MiningOptions(min_body_lines=1))) == 1

    def test_short_comment_skipped(self):
        src = 'def g(x):\n    """Hi."""\n    y = x\n    return y\n'
        assert mine_pairs([doc(src)]) == []

    def test_unparseable_skipped(self):
        stats = MiningStats()
        bad = doc('def f():\n    """never closed\n    return 1\n', "bad")
        pairs = mine_pairs([bad, doc(PY_MODULE, "good")], stats=stats)
        assert len(pairs) == 3 and stats.skipped_unparseable == 1 and stats.documents == 2

    def test_other_languages_skipped(self):
        stats = MiningStats()
        assert mine_pairs([doc("int main() {}", language="c++")], stats=stats) == []
        assert stats.skipped_language == 1

    def test_python2_syntax_tolerated(self):
        src = 'def f(x):\n    """Print the value of x out."""\n    print x\n    return x\n'
        assert len(mine_pairs([doc(src)])) == 1

    def test_leading_comments_option(self):
        src = "# Add two numbers together and\n# return their sum.\ndef add(a, b):\n    s = a + b\n    return s\n"
        assert mine_pairs([doc(src)]) == []
        (p,) = mine_pairs([doc(src)], options=MiningOptions(leading_comments=True))
        assert p.comment_first and p.span == (1, 5)
        assert resliced(p, src) == p.region_text()

    def test_ordering(self):
        pairs = mine_pairs([doc(PY_MODULE, "b"), doc(PY_MODULE, "a")])
        assert [(p.doc_id, p.span[0]) for p in pairs] == sorted((p.doc_id, p.span[0]) for p in pairs)

    def test_mask(self):
        masked, in_str = mask_python(['x = "a#b"  # c', "y = '''", "z", "'''"])
        assert masked[0] == 'x = SSSSS' + " " * 5
        assert in_str == [False, False, True, True]
        with pytest.raises(UnparseableDocument):
            mask_python(["x = 'oops"])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.sampled_from([
        "def f(a):", '    """Some words for docs."""', "    a += 1", "    return a", "", "x = 1",
        "class K:", "    def m(self):", "        '''Method words are here.'''", "        q = 1", "        return q",
    ]), max_size=30))
    def test_spans_always_reslice(self, lines):
        src = "\n".join(lines) + "\n"
        for p in mine_pairs([doc(src)], options=MiningOptions(min_body_lines=1)):
            assert resliced(p, src) == p.region_text()


def _pair(doc_id, start):
    return CommentFunctionPair(doc_id, "python", f"def f{start}():", '    """doc words here"""', "    pass\n    pass",
                               (start, start + 3))


class TestPrioritize:
    PAIRS = [_pair("a", 1), _pair("a", 10), _pair("b", 1), _pair("b", 20), _pair("c", 5)]

    def test_overlap_first(self):
        seeds = [seed("x", doc_id="b", start=21), seed("x", doc_id="c", start=8)]
        chosen, short = prioritize_pairs(self.PAIRS, seeds, 3)
        assert [(p.doc_id, p.span[0]) for p in chosen] == [("b", 20), ("c", 5), ("a", 1)]
        assert [p.overlaps_seed for p in chosen] == [True, True, False] and short == 0

    def test_shortfall(self):
        pairs = self.PAIRS + [_pair("d", 1), _pair("d", 9)]
        chosen, short = prioritize_pairs(pairs, [], 10)
        assert len(chosen) == 7 and short == 3

    def test_adjacent_not_overlapping(self):
        chosen, _ = prioritize_pairs([_pair("a", 1)], [seed("x", doc_id="a", start=5)], 1)
        assert not chosen[0].overlaps_seed


class TestSamples:
    def test_round_trip(self):
        pairs = mine_pairs([doc(PY_MODULE)], options=MiningOptions(leading_comments=True))
        samples = pairs_to_samples(pairs)
        assert [s.sample_id for s in samples] == ["pair-000000", "pair-000001", "pair-000002"]
        for p, s in zip(pairs, samples):
            assert s.origin == "pair_mined" and s.seed is None
            assert problem_code(s) == f"{p.signature}\n{p.comment}"
            assert s.solution == p.body
            assert s.meta["span"] == list(p.span)

    def test_comment_first_order(self):
        p = CommentFunctionPair("d", "python", "def f():", "# adds things up", "    a = 1\n    return a", (1, 4), True)
        assert problem_code(pairs_to_samples([p])[0]) == "# adds things up\ndef f():"

    def test_dict_round_trip(self):
        p = _pair("z", 3)
        assert CommentFunctionPair.from_dict(p.to_dict()) == p
