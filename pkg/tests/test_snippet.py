import pytest

from pagesearch.snippet import extract_snippet


def test_whole_sentence():
    text = "The critical mass of a star."
    s = text.index("critical")
    e = text.index("mass") + len("mass")
    snip = extract_snippet(text, [(s, e)], window=150)
    assert snip.text == text
    assert snip.page_byte_origin == 0
    assert snip.highlights == [(s, e)]
    assert snip.text[s:e] == "critical mass"


def test_match_at_start_of_tiny_page():
    text = "pluto page"
    snip = extract_snippet(text, [(0, 5)], window=150)
    assert snip.text == text
    assert snip.page_byte_origin == 0


def test_distant_second_match_excluded():
    filler = "alpha " * 200
    text = f"first target here. {filler}second target far away."
    a = text.index("target")
    b = text.rindex("target")
    snip = extract_snippet(text, [(a, a + 6), (b, b + 6)], window=150)
    assert len(snip.highlights) == 1


def test_sentence_boundary_on_both_sides():
    prefix = "Filler sentence words repeat here many times over again and again. "
    text = prefix + "The nebula is vast and distant. Next topic begins."
    a = text.index("nebula")
    snip = extract_snippet(text, [(a, a + 6)], window=60)
    assert snip.text == "The nebula is vast and distant."
    assert snip.highlights == [(4, 10)]


def test_word_boundary_trim_without_sentences():
    words = " ".join(f"word{i:03d}" for i in range(100))
    a = words.index("word050")
    snip = extract_snippet(words, [(a, a + 7)], window=64)
    # never splits a word: snippet is whole words only
    for w in snip.text.split():
        assert w.startswith("word")
        assert len(w) == 7


def test_never_splits_utf8():
    text = ("é" * 100) + " target " + ("ü" * 100)
    a = text.index("target")
    astart = len(text[:a].encode("utf-8"))
    snip = extract_snippet(text, [(astart, astart + 6)], window=64)
    snip.text.encode("utf-8")  # decodable by construction; also check content
    assert "target" in snip.text


def test_snippet_is_contiguous_substring():
    text = "Stars form in clouds. The cloud collapses under gravity. End."
    a = text.index("cloud", 25)
    snip = extract_snippet(text, [(a, a + 5)], window=48)
    data = text.encode("utf-8")
    origin = snip.page_byte_origin
    assert data[origin:origin + len(snip.text.encode())].decode() == snip.text


def test_out_of_bounds_span_rejected():
    with pytest.raises(ValueError, match="out of bounds"):
        extract_snippet("short", [(2, 99)], window=150)


def test_unordered_spans_rejected():
    with pytest.raises(ValueError):
        extract_snippet("alpha beta gamma", [(6, 10), (0, 5)], window=150)


def test_small_window_rejected():
    with pytest.raises(ValueError, match="window"):
        extract_snippet("alpha beta", [(0, 5)], window=8)


def test_deterministic():
    text = "Some page text with a match inside it somewhere."
    span = (text.index("match"), text.index("match") + 5)
    assert extract_snippet(text, [span]) == extract_snippet(text, [span])
