"""Plain-text extraction from PDF files.

Nothing on the package index covers PDF parsing in this environment, so the
extractor is implemented here directly. It handles the common layout of
machine-produced article PDFs: classic cross-reference tables (located by
scanning for object headers, so broken or incrementally-updated xref tables do
not matter), Flate/ASCIIHex/ASCII85 stream filters, simple (Type1/TrueType)
fonts with WinAnsi/MacRoman/Standard encodings and Differences arrays, and the
text-showing operators Tj/TJ/'/" with Td/TD/Tm/T* line tracking.

Out of scope: encrypted files (rejected), object streams, CID/Type0 composite
fonts (decoded byte-wise as a best effort), and OCR of scanned pages.
"""

from __future__ import annotations

import base64
import re
import zlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyDocument, UnreadablePdf

_WHITESPACE = b"\x00\t\n\x0c\r "
_DELIMITERS = b"()<>[]{}/%"


class _Name(str):
    """A PDF name object (distinct from a string)."""


class _Ref(tuple):
    """Indirect reference (object number, generation)."""


@dataclass
class _Stream:
    dictionary: dict
    raw: bytes


class _Lexer:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def _skip_ws(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in _WHITESPACE:
                self.pos += 1
            elif c == 0x25:  # '%' comment
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                break

    def peek_bytes(self, count: int) -> bytes:
        return self.data[self.pos : self.pos + count]

    def parse_object(self):
        self._skip_ws()
        data, n = self.data, len(self.data)
        if self.pos >= n:
            raise UnreadablePdf("unexpected end of data")
        c = data[self.pos]
        if c == 0x2F:  # '/'
            return self._parse_name()
        if c == 0x28:  # '('
            return self._parse_literal_string()
        if c == 0x3C:  # '<'
            if data[self.pos : self.pos + 2] == b"<<":
                return self._parse_dict_or_stream()
            return self._parse_hex_string()
        if c == 0x5B:  # '['
            return self._parse_array()
        token = self._parse_token()
        if token in (b"true", b"false"):
            return token == b"true"
        if token == b"null":
            return None
        if token == b"]" or token == b">>":
            raise UnreadablePdf("unbalanced collection")
        return self._parse_number_or_ref(token)

    def _parse_token(self) -> bytes:
        data, n = self.data, len(self.data)
        start = self.pos
        while self.pos < n and data[self.pos] not in _WHITESPACE and data[self.pos] not in _DELIMITERS:
            self.pos += 1
        if self.pos == start:  # delimiter token such as ']'
            if data[start : start + 2] == b">>":
                self.pos += 2
                return b">>"
            self.pos += 1
            return data[start : start + 1]
        return data[start : self.pos]

    def _parse_number_or_ref(self, token: bytes):
        try:
            if re.fullmatch(rb"[+-]?\d+", token):
                value = int(token)
            else:
                value = float(token)
        except ValueError as exc:
            raise UnreadablePdf(f"bad token {token[:20]!r}") from exc
        if isinstance(value, int) and value >= 0:
            # Look ahead for "<gen> R".
            save = self.pos
            self._skip_ws()
            m = re.match(rb"(\d+)\s+R(?![A-Za-z0-9])", self.data[self.pos : self.pos + 24])
            if m:
                whole = re.match(rb"(\d+)\s+R", self.data[self.pos :])
                self.pos += whole.end()
                return _Ref((value, int(m.group(1))))
            self.pos = save
        return value

    def _parse_name(self) -> _Name:
        self.pos += 1
        data, n = self.data, len(self.data)
        out = bytearray()
        while self.pos < n:
            c = data[self.pos]
            if c in _WHITESPACE or c in _DELIMITERS:
                break
            if c == 0x23 and self.pos + 2 < n:  # '#' hex escape
                try:
                    out.append(int(data[self.pos + 1 : self.pos + 3], 16))
                    self.pos += 3
                    continue
                except ValueError:
                    pass
            out.append(c)
            self.pos += 1
        return _Name(out.decode("latin-1"))

    def _parse_literal_string(self) -> bytes:
        data, n = self.data, len(self.data)
        self.pos += 1
        depth = 1
        out = bytearray()
        while self.pos < n:
            c = data[self.pos]
            if c == 0x5C:  # backslash
                self.pos += 1
                if self.pos >= n:
                    break
                e = data[self.pos]
                escapes = {0x6E: 0x0A, 0x72: 0x0D, 0x74: 0x09, 0x62: 0x08, 0x66: 0x0C}
                if e in escapes:
                    out.append(escapes[e])
                    self.pos += 1
                elif e in b"()\\":
                    out.append(e)
                    self.pos += 1
                elif e in b"\r\n":  # line continuation
                    self.pos += 1
                    if e == 0x0D and self.pos < n and data[self.pos] == 0x0A:
                        self.pos += 1
                elif 0x30 <= e <= 0x37:  # octal
                    digits = bytearray()
                    while len(digits) < 3 and self.pos < n and 0x30 <= data[self.pos] <= 0x37:
                        digits.append(data[self.pos])
                        self.pos += 1
                    out.append(int(digits, 8) & 0xFF)
                else:
                    out.append(e)
                    self.pos += 1
                continue
            if c == 0x28:
                depth += 1
            elif c == 0x29:
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return bytes(out)
            out.append(c)
            self.pos += 1
        raise UnreadablePdf("unterminated string")

    def _parse_hex_string(self) -> bytes:
        data, n = self.data, len(self.data)
        self.pos += 1
        digits = bytearray()
        while self.pos < n and data[self.pos] != 0x3E:  # '>'
            c = data[self.pos]
            if c not in _WHITESPACE:
                digits.append(c)
            self.pos += 1
        self.pos += 1
        if len(digits) % 2:
            digits.append(0x30)
        try:
            return bytes.fromhex(digits.decode("ascii"))
        except ValueError as exc:
            raise UnreadablePdf("bad hex string") from exc

    def _parse_array(self) -> list:
        self.pos += 1
        items = []
        while True:
            self._skip_ws()
            if self.pos >= len(self.data):
                raise UnreadablePdf("unterminated array")
            if self.data[self.pos] == 0x5D:  # ']'
                self.pos += 1
                return items
            items.append(self.parse_object())

    def _parse_dict_or_stream(self):
        self.pos += 2
        d: dict = {}
        while True:
            self._skip_ws()
            if self.peek_bytes(2) == b">>":
                self.pos += 2
                break
            key = self.parse_object()
            if not isinstance(key, _Name):
                raise UnreadablePdf("dictionary key is not a name")
            d[str(key)] = self.parse_object()
        save = self.pos
        self._skip_ws()
        if self.peek_bytes(6) == b"stream":
            self.pos += 6
            if self.peek_bytes(2) == b"\r\n":
                self.pos += 2
            elif self.peek_bytes(1) in (b"\n", b"\r"):
                self.pos += 1
            raw = self._read_stream_data(d)
            return _Stream(d, raw)
        self.pos = save
        return d

    def _read_stream_data(self, d: dict) -> bytes:
        length = d.get("Length")
        data = self.data
        if isinstance(length, int):
            raw = data[self.pos : self.pos + length]
            after = data[self.pos + length : self.pos + length + 20]
            if b"endstream" in after or after.strip() == b"":
                self.pos += length
                self._skip_ws()
                if self.peek_bytes(9) == b"endstream":
                    self.pos += 9
                return raw
        end = data.find(b"endstream", self.pos)
        if end < 0:
            raise UnreadablePdf("unterminated stream")
        raw = data[self.pos : end].rstrip(b"\r\n")
        self.pos = end + len(b"endstream")
        return raw


def _png_predictor(data: bytes, colors: int, bpc: int, columns: int) -> bytes:
    bpp = max(1, (colors * bpc) // 8)
    row_len = (columns * colors * bpc + 7) // 8
    out = bytearray()
    prev = bytearray(row_len)
    i = 0
    while i + 1 + row_len <= len(data) or (i < len(data) and len(data) - i > 1):
        ftype = data[i]
        row = bytearray(data[i + 1 : i + 1 + row_len])
        i += 1 + row_len
        for j in range(len(row)):
            left = row[j - bpp] if j >= bpp else 0
            up = prev[j]
            if ftype == 0:
                pass
            elif ftype == 1:
                row[j] = (row[j] + left) & 0xFF
            elif ftype == 2:
                row[j] = (row[j] + up) & 0xFF
            elif ftype == 3:
                row[j] = (row[j] + (left + up) // 2) & 0xFF
            elif ftype == 4:
                ul = prev[j - bpp] if j >= bpp else 0
                p = left + up - ul
                pa, pb, pc = abs(p - left), abs(p - up), abs(p - ul)
                pred = left if pa <= pb and pa <= pc else (up if pb <= pc else ul)
                row[j] = (row[j] + pred) & 0xFF
        out.extend(row)
        prev = row
    return bytes(out)


class _Document:
    def __init__(self, data: bytes):
        self.data = data
        self.objects: dict[tuple[int, int], tuple[int, object]] = {}
        self._cache: dict[tuple[int, int], object] = {}
        self._index_objects()

    def _index_objects(self) -> None:
        for m in re.finditer(rb"(?<![0-9])(\d{1,9})\s+(\d{1,5})\s+obj\b", self.data):
            key = (int(m.group(1)), int(m.group(2)))
            prior = self.objects.get(key)
            # Later definitions (incremental updates) win.
            if prior is None or m.end() > prior[0]:
                self.objects[key] = (m.end(), None)
        if not self.objects:
            raise UnreadablePdf("no indirect objects found")

    def get(self, ref: _Ref):
        key = (ref[0], ref[1])
        if key in self._cache:
            return self._cache[key]
        entry = self.objects.get(key) or self.objects.get((ref[0], 0))
        if entry is None:
            return None
        lexer = _Lexer(self.data, entry[0])
        try:
            obj = lexer.parse_object()
        except UnreadablePdf:
            obj = None
        self._cache[key] = obj
        return obj

    def resolve(self, obj):
        seen = 0
        while isinstance(obj, _Ref):
            obj = self.get(obj)
            seen += 1
            if seen > 32:
                raise UnreadablePdf("reference loop")
        return obj

    def decode_stream(self, stream: _Stream) -> bytes:
        filters = self.resolve(stream.dictionary.get("Filter"))
        if filters is None:
            return stream.raw
        if not isinstance(filters, list):
            filters = [filters]
        parms = self.resolve(stream.dictionary.get("DecodeParms"))
        if not isinstance(parms, list):
            parms = [parms] * len(filters)
        data = stream.raw
        for f, parm in zip(filters, parms):
            name = str(self.resolve(f))
            parm = self.resolve(parm) or {}
            if name in ("FlateDecode", "Fl"):
                try:
                    data = zlib.decompress(data)
                except zlib.error as exc:
                    raise UnreadablePdf("bad flate stream") from exc
                pred = self.resolve(parm.get("Predictor", 1)) or 1
                if isinstance(pred, (int, float)) and pred >= 10:
                    data = _png_predictor(
                        data,
                        int(self.resolve(parm.get("Colors", 1)) or 1),
                        int(self.resolve(parm.get("BitsPerComponent", 8)) or 8),
                        int(self.resolve(parm.get("Columns", 1)) or 1),
                    )
            elif name in ("ASCIIHexDecode", "AHx"):
                cleaned = re.sub(rb"[\s>]", b"", data)
                if len(cleaned) % 2:
                    cleaned += b"0"
                data = bytes.fromhex(cleaned.decode("ascii", "ignore"))
            elif name in ("ASCII85Decode", "A85"):
                text = data.strip()
                if text.startswith(b"<~"):
                    text = text[2:]
                if text.endswith(b"~>"):
                    text = text[:-2]
                data = base64.a85decode(text)
            else:
                # Image or unsupported filter: nothing textual to salvage.
                return b""
        return data

    def trailer_dicts(self) -> list[dict]:
        out = []
        for m in re.finditer(rb"trailer\b", self.data):
            lexer = _Lexer(self.data, m.end())
            try:
                d = lexer.parse_object()
            except UnreadablePdf:
                continue
            if isinstance(d, dict):
                out.append(d)
        return out

    def catalog(self) -> dict:
        for tr in reversed(self.trailer_dicts()):
            if "Encrypt" in tr:
                raise UnreadablePdf("encrypted document")
            root = self.resolve(tr.get("Root"))
            if isinstance(root, dict) and root.get("Type") in (None, "Catalog"):
                return root
        # Fall back to scanning for the catalog object (xref-stream files).
        for key in sorted(self.objects):
            obj = self.get(_Ref(key))
            if isinstance(obj, _Stream) and str(obj.dictionary.get("Type", "")) == "XRef":
                if "Encrypt" in obj.dictionary:
                    raise UnreadablePdf("encrypted document")
                root = self.resolve(obj.dictionary.get("Root"))
                if isinstance(root, dict):
                    return root
        for key in sorted(self.objects):
            obj = self.get(_Ref(key))
            if isinstance(obj, dict) and str(obj.get("Type", "")) == "Catalog":
                return obj
        raise UnreadablePdf("no document catalog")

    def pages(self) -> list[dict]:
        catalog = self.catalog()
        root = self.resolve(catalog.get("Pages"))
        if not isinstance(root, dict):
            raise UnreadablePdf("no page tree")
        out: list[dict] = []

        def walk(node: dict, depth: int, inherited_resources) -> None:
            if depth > 64:
                return
            ntype = str(node.get("Type", ""))
            resources = node.get("Resources", inherited_resources)
            if ntype == "Page" or ("Kids" not in node and "Contents" in node):
                page = dict(node)
                if "Resources" not in page and resources is not None:
                    page["Resources"] = resources
                out.append(page)
                return
            for kid in self.resolve(node.get("Kids")) or []:
                kid = self.resolve(kid)
                if isinstance(kid, dict):
                    walk(kid, depth + 1, resources)

        walk(root, 0, None)
        return out


# Unicode values for the glyph names that turn up in Differences arrays of
# article PDFs; anything absent simply falls back to the base encoding.
_GLYPH_NAMES = {
    "space": " ", "exclam": "!", "quotedbl": '"', "numbersign": "#", "dollar": "$",
    "percent": "%", "ampersand": "&", "quotesingle": "'", "quoteright": "’",
    "quoteleft": "‘", "parenleft": "(", "parenright": ")", "asterisk": "*",
    "plus": "+", "comma": ",", "hyphen": "-", "period": ".", "slash": "/",
    "zero": "0", "one": "1", "two": "2", "three": "3", "four": "4", "five": "5",
    "six": "6", "seven": "7", "eight": "8", "nine": "9", "colon": ":",
    "semicolon": ";", "less": "<", "equal": "=", "greater": ">", "question": "?",
    "at": "@", "bracketleft": "[", "backslash": "\\", "bracketright": "]",
    "asciicircum": "^", "underscore": "_", "grave": "`", "braceleft": "{",
    "bar": "|", "braceright": "}", "asciitilde": "~", "endash": "–",
    "emdash": "—", "bullet": "•", "quotedblleft": "“",
    "quotedblright": "”", "fi": "ﬁ", "fl": "ﬂ",
    "eacute": "é", "egrave": "è", "agrave": "à",
    "adieresis": "ä", "odieresis": "ö", "udieresis": "ü",
    "ccedilla": "ç", "ntilde": "ñ", "degree": "°",
}
for _ch in "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz":
    _GLYPH_NAMES[_ch] = _ch


@dataclass
class _Font:
    codec: str = "cp1252"
    differences: dict[int, str] = field(default_factory=dict)

    def decode(self, raw: bytes) -> str:
        if not self.differences:
            return raw.decode(self.codec, errors="replace")
        chars = []
        for b in raw:
            if b in self.differences:
                chars.append(self.differences[b])
            else:
                chars.append(bytes([b]).decode(self.codec, errors="replace"))
        return "".join(chars)


def _build_font(doc: _Document, font_dict: dict) -> _Font:
    font = _Font()
    enc = doc.resolve(font_dict.get("Encoding"))
    base = None
    diff_list = None
    if isinstance(enc, _Name) or isinstance(enc, str):
        base = str(enc)
    elif isinstance(enc, dict):
        base = str(doc.resolve(enc.get("BaseEncoding")) or "")
        diff_list = doc.resolve(enc.get("Differences"))
    if base == "MacRomanEncoding":
        font.codec = "mac_roman"
    elif base == "WinAnsiEncoding":
        font.codec = "cp1252"
    else:
        font.codec = "cp1252"
    if isinstance(diff_list, list):
        code = 0
        for item in diff_list:
            item = doc.resolve(item)
            if isinstance(item, (int, float)):
                code = int(item)
            elif isinstance(item, str):
                glyph = _GLYPH_NAMES.get(str(item))
                if glyph is not None:
                    font.differences[code] = glyph
                code += 1
    return font


class _TextAssembler:
    """Collects show-text output, inserting line breaks on vertical movement."""

    def __init__(self) -> None:
        self.parts: list[str] = []
        self._line_open = False

    def show(self, text: str) -> None:
        if text:
            self.parts.append(text)
            self._line_open = True

    def space(self) -> None:
        if self.parts and not self.parts[-1].endswith((" ", "\n")):
            self.parts.append(" ")

    def newline(self) -> None:
        if self._line_open:
            self.parts.append("\n")
            self._line_open = False

    def result(self) -> str:
        return "".join(self.parts).strip("\n")


def _page_fonts(doc: _Document, page: dict) -> dict[str, _Font]:
    fonts: dict[str, _Font] = {}
    resources = doc.resolve(page.get("Resources")) or {}
    font_map = doc.resolve(resources.get("Font")) or {}
    if isinstance(font_map, dict):
        for name, fdict in font_map.items():
            fdict = doc.resolve(fdict)
            if isinstance(fdict, dict):
                fonts[str(name)] = _build_font(doc, fdict)
    return fonts


def _interpret_content(doc: _Document, content: bytes, fonts: dict[str, _Font]) -> str:
    lexer = _Lexer(content)
    operands: list = []
    asm = _TextAssembler()
    font = _Font()
    last_y: float | None = None
    n = len(content)
    while True:
        lexer._skip_ws()
        if lexer.pos >= n:
            break
        c = content[lexer.pos]
        if c in b"/([<" or (content[lexer.pos : lexer.pos + 2] == b"<<"):
            try:
                operands.append(lexer.parse_object())
            except UnreadablePdf:
                break
            continue
        token = lexer._parse_token()
        if re.fullmatch(rb"[+-]?(\d+\.?\d*|\.\d+)", token):
            operands.append(float(token))
            continue
        op = token.decode("latin-1", "replace")
        if op == "Tf" and len(operands) >= 2:
            font = fonts.get(str(operands[-2]), font)
        elif op == "Tj" and operands and isinstance(operands[-1], bytes):
            asm.show(font.decode(operands[-1]))
        elif op in ("'", '"'):
            raw = operands[-1] if operands else b""
            asm.newline()
            if isinstance(raw, bytes):
                asm.show(font.decode(raw))
        elif op == "TJ" and operands and isinstance(operands[-1], list):
            for item in operands[-1]:
                if isinstance(item, bytes):
                    asm.show(font.decode(item))
                elif isinstance(item, (int, float)) and item < -180:
                    asm.space()
        elif op in ("Td", "TD") and len(operands) >= 2:
            ty = operands[-1]
            if isinstance(ty, (int, float)) and abs(ty) > 1e-6:
                asm.newline()
            else:
                asm.space()
        elif op == "T*":
            asm.newline()
        elif op == "Tm" and len(operands) >= 6:
            ty = operands[-1]
            if isinstance(ty, (int, float)):
                if last_y is not None and abs(ty - last_y) > 1e-6:
                    asm.newline()
                elif last_y is not None:
                    asm.space()
                last_y = float(ty)
        elif op == "BT":
            pass
        elif op == "ET":
            pass
        operands = []
    return asm.result()


def _page_text(doc: _Document, page: dict) -> str:
    contents = doc.resolve(page.get("Contents"))
    chunks: list[bytes] = []
    if isinstance(contents, _Stream):
        chunks.append(doc.decode_stream(contents))
    elif isinstance(contents, list):
        for item in contents:
            item = doc.resolve(item)
            if isinstance(item, _Stream):
                chunks.append(doc.decode_stream(item))
    fonts = _page_fonts(doc, page)
    return _interpret_content(doc, b"\n".join(chunks), fonts)


def extract_text(pdf_path: str | Path) -> str:
    """Extract plain text from a PDF, pages joined by single newlines.

    Raises UnreadablePdf for anything that cannot be parsed (missing file
    header, encryption, corrupt structure) and EmptyDocument when parsing
    succeeds but no characters can be extracted.
    """
    path = Path(pdf_path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UnreadablePdf(f"cannot read {path}: {exc}") from exc
    if not data.startswith(b"%PDF-"):
        raise UnreadablePdf(f"{path.name}: missing PDF header")
    doc = _Document(data)
    pages = doc.pages()
    if not pages:
        raise UnreadablePdf(f"{path.name}: no pages")
    texts = [_page_text(doc, page).strip("\n") for page in pages]
    combined = "\n".join(t for t in texts).strip("\n").strip()
    if not combined:
        raise EmptyDocument(f"{path.name}: no extractable text")
    return combined
