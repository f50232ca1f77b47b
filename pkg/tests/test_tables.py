import json

import numpy as np
import pytest

from gauntsh.gaunt import build_table
from gauntsh.tableio import (
    TableFormatError,
    crc64,
    load_table,
    save_table,
    table_from_bytes,
    table_to_bytes,
    tables_from_json,
    tables_to_json,
)


@pytest.fixture(scope="module")
def small_tables():
    return {
        "real": build_table("real", 2, 2),
        "complex": build_table("complex", 2, 2),
    }


def tables_equal(a, b):
    assert (a.basis, a.n1, a.n2) == (b.basis, b.n1, b.n2)
    for ma, mb in zip(a.matrices, b.matrices):
        assert (ma.n, ma.m) == (mb.n, mb.m)
        assert np.array_equal(ma.data, mb.data)


def test_crc64_known_vector():
    # standard check value of CRC-64/XZ
    assert crc64(b"123456789") == 0x995DC9BBDF1939FA


def test_binary_round_trip_bit_exact(tmp_path, small_tables):
    for basis, table in small_tables.items():
        path = tmp_path / f"{basis}.gsht"
        save_table(table, path)
        blob1 = path.read_bytes()
        loaded = load_table(path)
        tables_equal(table, loaded)
        save_table(loaded, path)
        assert path.read_bytes() == blob1


def test_binary_detects_corruption(small_tables):
    blob = bytearray(table_to_bytes(small_tables["real"]))
    blob[25] ^= 0xFF
    with pytest.raises(TableFormatError, match="checksum"):
        table_from_bytes(bytes(blob))


def test_binary_rejects_bad_magic():
    with pytest.raises(TableFormatError, match="magic"):
        table_from_bytes(b"NOPE" + bytes(32))


def test_binary_rejects_truncation(small_tables):
    blob = table_to_bytes(small_tables["real"])
    with pytest.raises(TableFormatError):
        table_from_bytes(blob[: len(blob) // 2])


def test_binary_rejects_bad_version(small_tables):
    blob = bytearray(table_to_bytes(small_tables["real"]))
    blob[4] = 99  # version field
    # re-seal the checksum so only the version check can fire
    import struct

    blob[-8:] = struct.pack("<Q", crc64(bytes(blob[:-8])))
    with pytest.raises(TableFormatError, match="version"):
        table_from_bytes(bytes(blob))


def test_json_round_trip(tmp_path, small_tables):
    table = small_tables["real"]
    path = tmp_path / "t.json"
    save_table(table, path, fmt="json")
    loaded = load_table(path)
    tables_equal(table, loaded)


def test_json_value_precision(small_tables):
    # 17 significant digits round-trip doubles exactly
    text = tables_to_json([small_tables["real"]])
    loaded, = tables_from_json(text)
    tables_equal(small_tables["real"], loaded)


def test_json_multi_table_selection(tmp_path, small_tables):
    text = tables_to_json([small_tables["complex"], small_tables["real"]])
    path = tmp_path / "both.json"
    path.write_text(text)
    doc = json.loads(text)
    assert [t["basis"] for t in doc["tables"]] == ["complex", "real"]
    tables_equal(small_tables["real"], load_table(path, basis="real"))
    tables_equal(small_tables["complex"], load_table(path, basis="complex"))
    with pytest.raises(TableFormatError):
        load_table(path)  # ambiguous without a basis
    with pytest.raises(TableFormatError):
        tables_from_json('{"format": "other"}')


def test_load_basis_mismatch(tmp_path, small_tables):
    path = tmp_path / "r.gsht"
    save_table(small_tables["real"], path)
    with pytest.raises(TableFormatError):
        load_table(path, basis="complex")


def test_save_rejects_unknown_format(tmp_path, small_tables):
    with pytest.raises(ValueError):
        save_table(small_tables["real"], tmp_path / "x", fmt="csv")


def test_deterministic_bytes_across_worker_counts(small_tables):
    parallel = build_table("real", 2, 2, workers=2)
    assert table_to_bytes(parallel) == table_to_bytes(small_tables["real"])
