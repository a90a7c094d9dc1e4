import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from findsum.errors import NoItemsFound, UnreadableInput
from findsum.ingest import clean_text, extract_tuples, parse_filing, round_cell_value, segment_text
from findsum.ingest.io import dumps_document, loads_document, tuples_from_tsv, tuples_to_tsv
from findsum.ingest.models import Table
from findsum.ingest.tuples import table_tuples
from findsum.textutil import normalize_ws

FIX = Path(__file__).parent / "fixtures"


def _html(body):
    return f"<html><body>{body}</body></html>".encode()


@pytest.fixture(scope="module")
def filing_a():
    return parse_filing((FIX / "filings" / "filing_a.html").read_bytes(), "filing_a")


@pytest.fixture(scope="module")
def golden():
    return json.loads((FIX / "filing_a.expected.json").read_text())


class TestGoldenFiling:
    def test_document_fields(self, filing_a, golden):
        assert filing_a.doc_id == golden["doc_id"]
        assert filing_a.company_id == golden["company_id"]
        assert filing_a.filing_date == golden["filing_date"]
        assert [i.item_id for i in filing_a.items] == [i["item_id"] for i in golden["items"]]

    def test_items_field_by_field(self, filing_a, golden):
        for item, exp in zip(filing_a.items, golden["items"]):
            assert item.text == exp["text"]
            got_segs = [{"segment_id": s.segment_id, "text": s.text, "word_count": s.word_count}
                        for s in item.segments]
            assert got_segs == exp["segments"]
            assert [t.to_dict() for t in item.tables] == exp["tables"]

    def test_tuples(self, filing_a, golden):
        assert [t.as_list() for t in extract_tuples(filing_a)] == golden["tuples"]

    def test_hidden_and_cover_content_dropped(self, filing_a):
        all_text = " ".join(i.text for i in filing_a.items)
        assert "hidden" not in all_text
        assert "FORM 10-K" not in all_text
        assert "*****" not in all_text

    def test_deterministic(self, golden):
        raw = (FIX / "filings" / "filing_a.html").read_bytes()
        a, b = parse_filing(raw, "filing_a"), parse_filing(raw, "filing_a")
        assert dumps_document(a, extract_tuples(a)) == dumps_document(b, extract_tuples(b))


class TestParseFiling:
    def test_minimal_item7(self):
        html = _html("<p>Item 7. MD&amp;A</p><p>Sales rose.</p>"
                     "<table><tr><td></td><td>2019</td></tr><tr><td>Sales</td><td>5</td></tr></table>")
        doc = parse_filing(html, "x")
        assert len(doc.items) == 1
        item = doc.items[0]
        assert len(item.segments) == 1 and len(item.tables) == 1
        assert item.text.count("[TABLE_0]") == 1

    def test_empty_body(self):
        with pytest.raises(NoItemsFound):
            parse_filing(_html(""), "x")

    def test_binary_input(self):
        with pytest.raises(UnreadableInput):
            parse_filing(b"\x00\x01\x02binary", "x")

    def test_latin1_fallback(self):
        raw = b"<html><body><p>Item 1. Business</p><p>Caf\xe9 sales.</p></body></html>"
        doc = parse_filing(raw, "x")
        assert "Caf\xe9" in doc.items[0].text

    def test_table_of_contents_duplicates(self):
        body = ("<p>Item 1. Business</p><p>Item 7. MD&amp;A</p>"
                "<p>Item 1. Business</p><p>We make lots of widgets for many people.</p>"
                "<p>Item 7. MD&amp;A</p><p>Results were good this year overall.</p>")
        doc = parse_filing(_html(body), "x")
        assert [i.item_id for i in doc.items] == ["item1", "item7"]
        assert "widgets" in doc.items[0].text and "Results" in doc.items[1].text

    def test_item_ids_unique_and_ordered(self):
        body = "".join(f"<p>ITEM {n}. Title</p><p>text {n}.</p>" for n in ("1", "1A", "2", "7", "7A"))
        doc = parse_filing(_html(body), "x")
        assert [i.item_id for i in doc.items] == ["item1", "item1a", "item2", "item7", "item7a"]

    def test_company_from_doc_id(self):
        doc = parse_filing(_html("<p>Item 1. Business</p>"), "acme_2019")
        assert doc.company_id == "acme" and doc.filing_date is None

    def test_layout_table_is_text(self):
        body = "<p>Item 1. Business</p><table><tr><td>Note</td><td>See below.</td></tr></table>"
        doc = parse_filing(_html(body), "x")
        assert doc.items[0].tables == [] and "Note See below." in doc.items[0].text

    def test_nested_table_stays_inside_outer(self):
        body = ("<p>Item 1. Business</p><table><tr><td></td><td>2019</td></tr>"
                "<tr><td>Sales<table><tr><td>inner</td></tr></table></td><td>5</td></tr></table>")
        doc = parse_filing(_html(body), "x")
        assert len(doc.items[0].tables) == 1
        assert doc.items[0].tables[0].cells == [["5"]]


class TestTables:
    def test_one_by_one(self):
        table = Table(0, [["total revenue"]], [["2019"]], [["545,700"]])
        (t,) = table_tuples(table)
        assert t.as_list() == ["total revenue", "2019", "545,700 & 545.7", "2019", 0, 0, 0]

    def test_nested_row_names_joined(self):
        html = _html("<p>Item 8. Statements</p><table>"
                     "<tr><td></td><td>2019</td></tr>"
                     "<tr><td>interest bearing deposits with banks</td><td></td></tr>"
                     "<tr><td style='padding-left:8pt'>federal funds sold</td><td>10,168</td></tr></table>")
        (t,) = extract_tuples(parse_filing(html, "x"))
        assert t.row_name == "interest bearing deposits with banks & federal funds sold"
        assert t.cell_value == "10,168 & 10.2"

    def test_empty_cell_no_tuple(self):
        table = Table(0, [["a"], ["b"]], [["2019"]], [["1"], [None]])
        assert len(table_tuples(table)) == 1

    def test_filing_date_fallback(self):
        table = Table(0, [["a"]], [["Q1"]], [["1"]])
        assert table_tuples(table, "2020-02-28")[0].date == "2020-02-28"

    def test_non_numeric_value_has_no_separator(self):
        table = Table(0, [["a"]], [["Q1"]], [["R & D"]])
        assert " & " not in table_tuples(table)[0].cell_value

    def test_colspan_and_rowspan_headers(self):
        html = _html("<p>Item 7. MD&amp;A</p><table>"
                     "<tr><td rowspan='2'></td><td colspan='2'>Year ended</td></tr>"
                     "<tr><td>2019</td><td>2018</td></tr>"
                     "<tr><td>Sales</td><td>1</td><td>2</td></tr></table>")
        (table,) = parse_filing(html, "x").items[0].tables
        assert table.col_headers == [["Year ended", "2019"], ["Year ended", "2018"]]
        assert table.shape == (1, 2)


class TestRounding:
    @pytest.mark.parametrize("raw,expected", [
        ("15,700", "15.7"), ("2,038", "2"), ("10,168", "10.2"),
        ("17,838", "17.8"), ("3,659", "3.7"), ("n/a", None), ("(2,038)", "-2"),
        ("$ 545,700", "545.7"), ("50", "0.1"), ("49", "0"), ("-50", "-0.1"), ("", None),
    ])
    def test_values(self, raw, expected):
        assert round_cell_value(raw) == expected

    def test_custom_divisor(self):
        assert round_cell_value("15,700", divisor=1) == "15700"
        assert round_cell_value("1,250,000", divisor=1000000) == "1.3"

    @given(st.integers(-10**9, 10**9))
    def test_deterministic_and_parenthesis_negates(self, v):
        raw = f"{abs(v):,}"
        pos = round_cell_value(raw)
        neg = round_cell_value(f"({raw})")
        assert pos == round_cell_value(raw)
        assert neg == ("0" if pos == "0" else "-" + pos)


class TestCleanText:
    def test_rule_example(self):
        assert clean_text("=====\nItem 1. Business") == "Item 1. Business"

    def test_golden_cover_page(self):
        raw = (FIX / "cover_page.txt").read_text()
        assert clean_text(raw) == (FIX / "cover_page.expected.txt").read_text()

    @given(st.text(alphabet="ab =*.\n-Item 17", max_size=80))
    def test_idempotent(self, text):
        once = clean_text(text)
        assert clean_text(once) == once

    def test_no_heading_kept(self):
        assert clean_text("just  some text") == "just some text"


class TestSegmentText:
    def _sent(self, tag, n=10):
        return " ".join([tag.capitalize()] + [tag] * (n - 2) + [tag + "."])

    def test_packing(self):
        text = " ".join(self._sent(t) for t in ("aa", "bb", "cc"))
        segs = segment_text(text, 25)
        assert [s.word_count for s in segs] == [20, 10]

    def test_empty(self):
        assert segment_text("", 25) == []

    def test_over_long(self):
        segs = segment_text(self._sent("aa", 40), 25)
        assert len(segs) == 1 and segs[0].word_count == 40

    def test_invalid_budget(self):
        with pytest.raises(ValueError):
            segment_text("A b.", 0)

    @settings(max_examples=100)
    @given(st.lists(st.tuples(st.sampled_from(["Ab", "cd", "Ef."]), st.integers(1, 12)), max_size=30),
           st.integers(1, 40))
    def test_lossless(self, words, budget):
        text = " ".join(w for w, n in words for _ in range(n))
        segs = segment_text(text, budget)
        assert normalize_ws(" ".join(s.text for s in segs)) == normalize_ws(text)
        assert all(s.word_count == len(s.text.split()) for s in segs)
        assert [s.segment_id for s in segs] == list(range(len(segs)))


class TestInvariants:
    def test_placeholder_bijection_and_tuple_count(self, filing_a):
        import re
        ids = []
        for item in filing_a.items:
            found = [int(x) for x in re.findall(r"\[TABLE_(\d+)\]", item.text)]
            assert sorted(found) == sorted(t.table_id for t in item.tables)
            ids += found
        assert sorted(ids) == list(range(len(filing_a.tables())))
        cells = sum(1 for t in filing_a.tables() for row in t.cells for c in row if c)
        tuples = extract_tuples(filing_a)
        assert len(tuples) == cells
        assert len({t.key for t in tuples}) == len(tuples)

    def test_segments_lossless(self, filing_a):
        from findsum.ingest.text import remove_placeholders
        for item in filing_a.items:
            joined = normalize_ws(" ".join(s.text for s in item.segments))
            assert joined == normalize_ws(remove_placeholders(item.text))

    def test_jsonl_and_tsv_roundtrip(self, filing_a):
        tuples = extract_tuples(filing_a)
        text = dumps_document(filing_a, tuples)
        kinds = {json.loads(line)["kind"] for line in text.splitlines()}
        assert kinds == {"document", "item", "segment", "table", "tuple"}
        doc, back = loads_document(text)
        assert back == tuples
        assert dumps_document(doc, back) == text
        assert tuples_from_tsv(tuples_to_tsv(tuples)) == tuples
        assert all(len(line.split("\t")) == 7 for line in tuples_to_tsv(tuples).splitlines())
