import numpy as np
import pytest

from droidtrace.dataset_io import export_arff, export_dataset_csv, import_dataset_csv
from droidtrace.errors import DataError
from helpers import make_dataset, random_dataset


def test_csv_round_trip_is_identity(tmp_path):
    rng = np.random.default_rng(44)
    for trial in range(10):
        ds = random_dataset(rng, n=int(rng.integers(1, 15)), d=int(rng.integers(1, 8)))
        path = tmp_path / f"ds{trial}.csv"
        export_dataset_csv(ds, path)
        assert import_dataset_csv(path) == ds


def test_csv_header_layout(tmp_path):
    ds = make_dataset([(1, 0)], "M", det_counts=[3], names=("open", "read"))
    path = tmp_path / "ds.csv"
    export_dataset_csv(ds, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "app_id,label,det_count,open,read"
    assert lines[1] == "app000,malicious,3,1,0"


def test_csv_export_deterministic(tmp_path):
    rng = np.random.default_rng(3)
    ds = random_dataset(rng, n=6, d=4)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_dataset_csv(ds, a)
    export_dataset_csv(ds, b)
    assert a.read_bytes() == b.read_bytes()


def test_csv_round_trip_handles_odd_names(tmp_path):
    ds = make_dataset([(1, 0)], "M", names=("weird name", "quote'name"))
    path = tmp_path / "ds.csv"
    export_dataset_csv(ds, path)
    assert import_dataset_csv(path) == ds


def write_csv(tmp_path, body):
    path = tmp_path / "bad.csv"
    path.write_text(body, encoding="utf-8")
    return path


def test_import_empty_file(tmp_path):
    with pytest.raises(DataError, match="missing header"):
        import_dataset_csv(write_csv(tmp_path, ""))


def test_import_wrong_header(tmp_path):
    with pytest.raises(DataError, match="missing header"):
        import_dataset_csv(write_csv(tmp_path, "foo,bar\n1,2\n"))


def test_import_non_binary_bit_names_line(tmp_path):
    body = "app_id,label,det_count,open\nx,malicious,0,1\ny,benign,0,2\n"
    with pytest.raises(DataError, match="line 3.*non-binary bit"):
        import_dataset_csv(write_csv(tmp_path, body))


def test_import_unknown_label_names_line(tmp_path):
    body = "app_id,label,det_count,open\nx,sus,0,1\n"
    with pytest.raises(DataError, match="line 2.*unknown label"):
        import_dataset_csv(write_csv(tmp_path, body))


def test_import_wrong_width_names_line(tmp_path):
    body = "app_id,label,det_count,open\nx,malicious,0\n"
    with pytest.raises(DataError, match="line 2.*expected 4 columns"):
        import_dataset_csv(write_csv(tmp_path, body))


def test_import_bad_det_count(tmp_path):
    body = "app_id,label,det_count,open\nx,malicious,-3,1\n"
    with pytest.raises(DataError, match="negative det_count"):
        import_dataset_csv(write_csv(tmp_path, body))


def test_import_missing_file(tmp_path):
    with pytest.raises(DataError, match="cannot read"):
        import_dataset_csv(tmp_path / "nope.csv")


def test_import_header_only_gives_empty_dataset(tmp_path):
    ds = import_dataset_csv(write_csv(tmp_path, "app_id,label,det_count,open\n"))
    assert ds.rows == []
    assert ds.vocabulary.names == ("open",)


# ----------------------------------------------------------------------- ARFF


def test_arff_minimal_shape(tmp_path):
    # One bit feature plus det_count = a 2-feature dataset: 5 header lines.
    ds = make_dataset([(1,)], "M", det_counts=[2], names=("open",))
    path = tmp_path / "out.arff"
    export_arff(ds, path)
    lines = path.read_text().splitlines()
    assert lines == [
        "@relation syscalls",
        "@attribute open {0,1}",
        "@attribute det_count numeric",
        "@attribute class {malicious,benign}",
        "@data",
        "1,2,malicious",
    ]


def test_arff_quotes_names_with_spaces(tmp_path):
    ds = make_dataset([(1,)], "B", names=("weird name",))
    path = tmp_path / "out.arff"
    export_arff(ds, path)
    assert "@attribute 'weird name' {0,1}" in path.read_text().splitlines()


def test_arff_empty_dataset_header_only(tmp_path):
    ds = make_dataset([], "", names=("open", "read"))
    path = tmp_path / "out.arff"
    export_arff(ds, path)
    lines = path.read_text().splitlines()
    assert lines[-1] == "@data"
    assert len(lines) == 6  # relation + 2 bits + det_count + class + data


def test_arff_row_order_matches_dataset(tmp_path):
    ds = make_dataset([(1, 0), (0, 1)], "MB", det_counts=[5, 0])
    path = tmp_path / "out.arff"
    export_arff(ds, path)
    lines = path.read_text().splitlines()
    assert lines[-2:] == ["1,0,5,malicious", "0,1,0,benign"]
