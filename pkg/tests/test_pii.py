import pytest

from privlens.privacy import Gazetteers, PiiKind, detect_pii, has_pii


@pytest.fixture(scope="module")
def gazetteers():
    return Gazetteers.from_dir()


class TestDetectPii:
    def test_location_example(self, gazetteers):
        found = detect_pii("flying to Cairo this evening", gazetteers)
        assert [(a.surface, a.kind) for a in found] == [("Cairo", PiiKind.LOCATION)]

    def test_name_example(self, gazetteers):
        found = detect_pii("our daughter Miha has been accepted", gazetteers)
        assert [(a.surface, a.kind) for a in found] == [("Miha", PiiKind.NAME)]

    def test_lowercase_common_noun_not_matched(self, gazetteers):
        assert detect_pii("i baked an apple pie today", gazetteers) == []

    def test_capitalised_org_matched(self, gazetteers):
        found = detect_pii("Apple shipped a new tracker", gazetteers)
        assert [(a.surface, a.kind) for a in found] == [("Apple", PiiKind.ORGANISATION)]

    def test_longest_match_wins(self, gazetteers):
        # "Chester Zoo" and "Chester" are both gazetteer entries.
        found = detect_pii("great day at Chester Zoo with the kids", gazetteers)
        assert [a.surface for a in found] == ["Chester Zoo"]

    def test_multiple_annotations_sorted_and_disjoint(self, gazetteers):
        text = "Sarah is flying from London to Dubai with Emma"
        found = detect_pii(text, gazetteers)
        surfaces = [a.surface for a in found]
        assert surfaces == ["Sarah", "London", "Dubai", "Emma"]
        for a, b in zip(found, found[1:]):
            assert a.end <= b.start

    def test_byte_offsets_with_multibyte_text(self, gazetteers):
        text = "café stop, then Cairo"
        found = detect_pii(text, gazetteers)
        assert len(found) == 1
        raw = text.encode("utf-8")
        assert raw[found[0].start:found[0].end].decode("utf-8") == "Cairo"

    def test_spans_within_bounds(self, gazetteers):
        text = "meeting Miha at Chester Zoo near the NHS clinic"
        size = len(text.encode("utf-8"))
        for annotation in detect_pii(text, gazetteers):
            assert 0 <= annotation.start < annotation.end <= size

    def test_has_pii(self, gazetteers):
        assert has_pii("off to Melbourne tomorrow", gazetteers)
        assert not has_pii("off to the shops tomorrow", gazetteers)
