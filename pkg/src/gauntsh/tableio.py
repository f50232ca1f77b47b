"""Persistence of coupling-matrix tables.

Binary format (little-endian throughout)::

    magic   4 bytes  "GSHT"
    version u16
    basis   u8       0 = complex, 1 = real
    n1      u16
    n2      u16
    blocks  one per target (n, m) in ACN order, (n1+n2+1)^2 of them:
        count    u64
        triplets count * (q u32, l u32, value f64), row-major, nonzeros only
    crc     u64      CRC-64/XZ of all preceding bytes

Identical tables produce identical bytes; values round-trip bit-exactly.
A JSON export (values printed with 17 significant digits) is provided for
diffing and interoperability.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .gaunt import GauntMatrix, GauntTable
from .sh import acn_order_degree, num_coeffs

FORMAT_VERSION = 1
_MAGIC = b"GSHT"
_BASIS_CODE = {"complex": 0, "real": 1}
_BASIS_NAME = {v: k for k, v in _BASIS_CODE.items()}
_TRIPLET = np.dtype([("q", "<u4"), ("l", "<u4"), ("v", "<f8")])


class TableFormatError(ValueError):
    """Raised for malformed, truncated, or corrupted table files."""


def _crc64_table():
    poly = 0xC96C5795D7870F42  # CRC-64/XZ, reflected
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = (crc >> 1) ^ poly if crc & 1 else crc >> 1
        table.append(crc)
    return tuple(table)


_CRC_TABLE = _crc64_table()


def crc64(data: bytes) -> int:
    """CRC-64/XZ checksum."""
    crc = 0xFFFFFFFFFFFFFFFF
    table = _CRC_TABLE
    for byte in data:
        crc = table[(crc ^ byte) & 0xFF] ^ (crc >> 8)
    return crc ^ 0xFFFFFFFFFFFFFFFF


def _matrix_triplets(data: np.ndarray) -> np.ndarray:
    rows, cols = np.nonzero(data)
    trip = np.empty(rows.size, dtype=_TRIPLET)
    trip["q"] = rows
    trip["l"] = cols
    trip["v"] = data[rows, cols]
    return trip


def table_to_bytes(table: GauntTable) -> bytes:
    payload = bytearray()
    payload += _MAGIC
    payload += struct.pack("<HBHH", FORMAT_VERSION, _BASIS_CODE[table.basis],
                           table.n1, table.n2)
    for mat in table.matrices:
        trip = _matrix_triplets(mat.data)
        payload += struct.pack("<Q", trip.size)
        payload += trip.tobytes()
    payload += struct.pack("<Q", crc64(bytes(payload)))
    return bytes(payload)


def table_from_bytes(blob: bytes) -> GauntTable:
    if len(blob) < 19:
        raise TableFormatError("file too short for a table header")
    if blob[:4] != _MAGIC:
        raise TableFormatError("bad magic bytes, not a table file")
    stored_crc, = struct.unpack("<Q", blob[-8:])
    if crc64(blob[:-8]) != stored_crc:
        raise TableFormatError("checksum mismatch, file corrupted")
    version, basis_code, n1, n2 = struct.unpack("<HBHH", blob[4:11])
    if version != FORMAT_VERSION:
        raise TableFormatError(f"unsupported format version {version}")
    if basis_code not in _BASIS_NAME:
        raise TableFormatError(f"unknown basis code {basis_code}")
    basis = _BASIS_NAME[basis_code]
    at = 11
    matrices = []
    shape = (num_coeffs(n1), num_coeffs(n2))
    for t in range(num_coeffs(n1 + n2)):
        if at + 8 > len(blob) - 8:
            raise TableFormatError("truncated block stream")
        count, = struct.unpack("<Q", blob[at:at + 8])
        at += 8
        end = at + count * _TRIPLET.itemsize
        if end > len(blob) - 8:
            raise TableFormatError("truncated triplet data")
        trip = np.frombuffer(blob[at:end], dtype=_TRIPLET)
        at = end
        data = np.zeros(shape)
        data[trip["q"], trip["l"]] = trip["v"]
        n, m = acn_order_degree(t)
        matrices.append(GauntMatrix(basis, n1, n2, n, m, data))
    if at != len(blob) - 8:
        raise TableFormatError("trailing bytes after the block stream")
    return GauntTable(basis, n1, n2, tuple(matrices))


def _table_json_fragment(table: GauntTable) -> str:
    lines = [
        f'{{"basis": "{table.basis}", "n1": {table.n1}, "n2": {table.n2}, "blocks": ['
    ]
    frags = []
    for mat in table.matrices:
        trip = _matrix_triplets(mat.data)
        entries = ", ".join(
            f'[{int(q)}, {int(l)}, {float(v):.17g}]'
            for q, l, v in zip(trip["q"], trip["l"], trip["v"]))
        frags.append(f'{{"n": {mat.n}, "m": {mat.m}, "triplets": [{entries}]}}')
    lines.append(",\n".join(frags))
    lines.append("]}")
    return "\n".join(lines)


def tables_to_json(tables) -> str:
    """JSON text for one or more tables, values at 17 significant digits."""
    frags = ",\n".join(_table_json_fragment(t) for t in tables)
    return (f'{{"format": "gsht", "version": {FORMAT_VERSION}, "tables": [\n'
            f"{frags}\n]}}\n")


def tables_from_json(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"invalid JSON table file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != "gsht":
        raise TableFormatError("not a JSON table document")
    if doc.get("version") != FORMAT_VERSION:
        raise TableFormatError(f"unsupported format version {doc.get('version')}")
    tables = []
    for tdoc in doc["tables"]:
        basis, n1, n2 = tdoc["basis"], int(tdoc["n1"]), int(tdoc["n2"])
        shape = (num_coeffs(n1), num_coeffs(n2))
        blocks = tdoc["blocks"]
        if len(blocks) != num_coeffs(n1 + n2):
            raise TableFormatError("block count does not match the orders")
        matrices = []
        for t, bdoc in enumerate(blocks):
            n, m = acn_order_degree(t)
            if (bdoc["n"], bdoc["m"]) != (n, m):
                raise TableFormatError("blocks are not in ACN order")
            data = np.zeros(shape)
            for q, l, v in bdoc["triplets"]:
                data[q, l] = float(v)
            matrices.append(GauntMatrix(basis, n1, n2, n, m, data))
        tables.append(GauntTable(basis, n1, n2, tuple(matrices)))
    return tables


def save_table(table: GauntTable, path, fmt: str = "binary") -> None:
    """Write a table to disk in the binary or JSON format."""
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(table_to_bytes(table))
    elif fmt == "json":
        with open(path, "w", encoding="ascii") as fh:
            fh.write(tables_to_json([table]))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load_table(path, basis: str | None = None) -> GauntTable:
    """Read a table file, auto-detecting the binary or JSON format.

    ``basis`` selects one table when a JSON file stores several.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] == _MAGIC:
        table = table_from_bytes(blob)
        if basis is not None and table.basis != basis:
            raise TableFormatError(
                f"file holds a {table.basis}-basis table, not {basis}")
        return table
    tables = tables_from_json(blob.decode("ascii"))
    if basis is not None:
        for t in tables:
            if t.basis == basis:
                return t
        raise TableFormatError(f"no {basis}-basis table in file")
    if len(tables) != 1:
        raise TableFormatError(
            "file holds several tables; pass basis= to choose one")
    return tables[0]
