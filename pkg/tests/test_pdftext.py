import pytest

from litnet.errors import EmptyDocument, UnreadablePdf
from litnet.pdftext import extract_text

from conftest import FIXTURES


def read_golden(name):
    # golden files carry one trailing newline the extractor does not emit
    text = (FIXTURES / name).read_text(encoding="utf-8")
    return text[:-1] if text.endswith("\n") else text


def test_two_column_fixture_matches_reference_golden():
    assert extract_text(FIXTURES / "two_col.pdf") == read_golden("two_col_golden.txt")


def test_handcrafted_operators_match_golden():
    # covers kerned show arrays, hex strings, escapes, and a glyph remap
    assert extract_text(FIXTURES / "handmade.pdf") == read_golden("handmade_golden.txt")


def test_extraction_is_deterministic():
    a = extract_text(FIXTURES / "two_col.pdf")
    b = extract_text(FIXTURES / "two_col.pdf")
    assert a == b


def test_single_line_document_extracts_identically(tmp_path):
    from reportlab.pdfgen import canvas

    path = tmp_path / "hello.pdf"
    c = canvas.Canvas(str(path))
    c.drawString(100, 700, "Hello world")
    c.save()
    assert extract_text(path) == "Hello world"


def test_pages_join_in_reading_order(tmp_path):
    from reportlab.pdfgen import canvas

    path = tmp_path / "two_pages.pdf"
    c = canvas.Canvas(str(path))
    c.drawString(100, 700, "first page")
    c.showPage()
    c.drawString(100, 700, "second page")
    c.save()
    assert extract_text(path) == "first page\nsecond page"


def test_zero_byte_file_is_unreadable():
    with pytest.raises(UnreadablePdf):
        extract_text(FIXTURES / "empty.pdf")


def test_non_pdf_bytes_are_unreadable():
    with pytest.raises(UnreadablePdf):
        extract_text(FIXTURES / "not_a_pdf.pdf")


def test_truncated_file_is_unreadable():
    with pytest.raises(UnreadablePdf):
        extract_text(FIXTURES / "truncated.pdf")


def test_encrypted_file_is_unreadable():
    with pytest.raises(UnreadablePdf):
        extract_text(FIXTURES / "encrypted.pdf")


def test_textless_page_is_empty_document():
    with pytest.raises(EmptyDocument):
        extract_text(FIXTURES / "blank.pdf")


def test_missing_file_is_unreadable(tmp_path):
    with pytest.raises(UnreadablePdf):
        extract_text(tmp_path / "no_such_file.pdf")
