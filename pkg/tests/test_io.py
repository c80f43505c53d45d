import numpy as np
import pytest

from seplam.mmio import MatrixInputError, read_matrix, write_matrix_mm


def random_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


class TestMatrixMarket:
    def test_round_trip_bit_exact(self, tmp_path, rng):
        M = random_complex(rng, (5, 5))
        p = str(tmp_path / "m.mtx")
        write_matrix_mm(p, M)
        back = read_matrix(p)
        assert np.array_equal(back, M)

    def test_coordinate_format_fill_in(self, tmp_path):
        p = tmp_path / "c.mtx"
        p.write_text(
            "%%MatrixMarket matrix coordinate complex general\n"
            "2 2 1\n"
            "1 1 1.0 2.0\n"
        )
        M = read_matrix(str(p))
        assert M.shape == (2, 2)
        assert M[0, 0] == 1.0 + 2.0j
        assert M[0, 1] == M[1, 0] == M[1, 1] == 0.0

    def test_real_array_format(self, tmp_path):
        p = tmp_path / "r.mtx"
        p.write_text(
            "%%MatrixMarket matrix array real general\n"
            "2 2\n1.0\n3.0\n2.0\n4.0\n"
        )
        M = read_matrix(str(p))
        assert np.array_equal(M, np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex))

    def test_non_square_rejected(self, tmp_path):
        p = tmp_path / "ns.mtx"
        p.write_text(
            "%%MatrixMarket matrix array real general\n"
            "1 2\n1.0\n2.0\n"
        )
        with pytest.raises(MatrixInputError):
            read_matrix(str(p))

    def test_malformed_header(self, tmp_path):
        p = tmp_path / "bad.mtx"
        p.write_text("%%MatrixMarket nonsense\n1 1\n1.0\n")
        with pytest.raises(MatrixInputError):
            read_matrix(str(p))


class TestCsv:
    def test_single_entry(self, tmp_path):
        p = tmp_path / "one.csv"
        p.write_text("0+0i\n")
        M = read_matrix(str(p))
        assert M.shape == (1, 1)
        assert M[0, 0] == 0.0

    def test_complex_entries(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1.5-2i, 3\n-1i, 0.25\n")
        M = read_matrix(str(p))
        assert np.array_equal(
            M, np.array([[1.5 - 2j, 3.0], [-1j, 0.25]], dtype=complex)
        )

    def test_parse_error_names_line(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1, 2\n3, nope\n")
        with pytest.raises(MatrixInputError, match=r":2:"):
            read_matrix(str(p))

    def test_ragged_rows_rejected(self, tmp_path):
        p = tmp_path / "rag.csv"
        p.write_text("1, 2\n3\n")
        with pytest.raises(MatrixInputError, match=r":2:"):
            read_matrix(str(p))

    def test_non_square_rejected(self, tmp_path):
        p = tmp_path / "wide.csv"
        p.write_text("1, 2, 3\n4, 5, 6\n")
        with pytest.raises(MatrixInputError):
            read_matrix(str(p))

    def test_empty_rejected(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("\n\n")
        with pytest.raises(MatrixInputError):
            read_matrix(str(p))


class TestMissingFile:
    def test_missing_path_named(self, tmp_path):
        missing = str(tmp_path / "nowhere.mtx")
        with pytest.raises(MatrixInputError, match="nowhere"):
            read_matrix(missing)
