import numpy as np
import pytest

from tritassert.assertions import COMBINED, SUPERPOSITION
from tritassert.circuit import Circuit, simulate
from tritassert.corpus import CORPUS_DIR
from tritassert.dsl import parse, serialize
from tritassert.errors import InputError, ParseError
from tritassert.gates import chrestenson_state

CORPUS_FILES = sorted(CORPUS_DIR.glob("*.t3"))


def test_chrestenson_line_prepares_plus():
    c, specs = parse("qutrits 1\ninit 0\ngate ch1 0\n")
    assert specs == []
    np.testing.assert_allclose(simulate(c).final.amps, chrestenson_state(0), atol=1e-12)


def test_controlled_line_fires_on_two():
    c, _ = parse("qutrits 2\ninit 2 0\ncgate z+1 0 1\n")
    assert simulate(c).final.terms() == [("21", 1 + 0j)]


def test_case_comments_crlf_and_default_init():
    src = "# header comment\r\nQUTRITS 2\r\n\r\nGate Z+2 1   # trailing\r\nA2 1 0\r\nMeasure 0->m\r\n"
    c, _ = parse(src)
    assert c.init_digits == (0, 0)
    assert simulate(c).final.terms() == [("12", 1 + 0j)]
    assert c.measurements[0].register == "m"


def test_assert_directives_allocate_ancillas_in_order():
    src = "qutrits 2\nassert superposition 1 minus2\nassert combined 0 1 expect 1 2\nassert classical 0 == 1\n"
    c, specs = parse(src)
    assert [s.ancillas for s in specs] == [(2,), (3, 4), (5,)]
    assert c.num_qutrits == 6 and c.init_digits == (0, 0, 2, 0, 0, 2)
    assert specs[0].family == SUPERPOSITION and specs[1].family == COMBINED
    assert specs[1].param == (1, 2)


def test_empty_circuit_serializes_to_header_only():
    assert serialize(Circuit(3)) == "qutrits 3\ninit 0 0 0\n"


@pytest.mark.parametrize(
    "src,line,fragment",
    [
        ("qutrits 1\ngate z+9 0\n", 2, "unknown gate label"),
        ("qutrits 1\ngate z+1 1\n", 2, "out of range"),
        ("qutrits 2\ncgate ch1 0 1\n", 2, "unknown controlled gate"),
        ("qutrits 2\na1 1 1\n", 2, "must differ"),
        ("qutrits 2\nmeasure 0 -> m\nmeasure 1 -> m\n", 3, "duplicate register"),
        ("qutrits 2\nmeasure 0 -> m\ngate z+1 0\n", 3, "only measure"),
        ("qutrits 2\ninit 0 3\n", 2, "out of range"),
        ("qutrits 2\ninit 0\n", 2, "end of line"),
        ("gate z+1 0\n", 1, "unexpected"),
        ("qutrits 1\nslice a\nslice b\n", 3, "at least one op"),
        ("qutrits 1\nslice a\ngate z0 0\nslice a\n", 4, "duplicate slice"),
        ("qutrits 2\nassert entangled c row 0 0 1\n", 2, "unexpected"),
        ("qutrits 2\nassert entangled a row 3 0 1\n", 2, "out of range"),
        ("qutrits 2\nassert superposition 0 minus3\n", 2, "unexpected"),
        ("qutrits 2\nassert classical 0 = 1\n", 2, "unexpected"),
        ("qutrits 2\nassert combined 0 2 expect 0 0\n", 2, "out of range"),
        ("qutrits 2\ngate z+1 0 extra\n", 2, "trailing"),
        ("qutrits 1\ninit 0\ninit 0\n", 3, "top of the file"),
        ("", 1, "empty"),
    ],
)
def test_parse_errors_point_at_line(src, line, fragment):
    with pytest.raises(ParseError) as err:
        parse(src)
    assert err.value.line == line
    assert fragment in err.value.message


def test_parse_error_column_and_hint():
    with pytest.raises(ParseError) as err:
        parse("qutrits 1\ngate   z+9 0\n")
    assert err.value.column == 8
    assert "z+1" in err.value.expected
    assert str(err.value).startswith("line 2, column 8:")


def test_ancillas_are_not_user_addressable():
    with pytest.raises(ParseError):
        parse("qutrits 1\nassert classical 0 == 0\ngate z+1 1\n")


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.stem)
def test_corpus_round_trip(path):
    text = path.read_text(encoding="utf-8")
    circuit, specs = parse(text)
    assert serialize(circuit, specs) == text
    assert parse(serialize(circuit, specs)) == (circuit, specs)


def _corruptions(text):
    lines = text.splitlines()
    for i, line in enumerate(lines):
        toks = line.split(" ")
        for j in range(len(toks)):
            for bad in ("@", "z+9", None):
                new = toks[:j] + ([] if bad is None else [bad]) + toks[j + 1:]
                yield i + 1, "\n".join(lines[:i] + [" ".join(new)] + lines[i + 1:]) + "\n"


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.stem)
def test_single_token_corruption_reports_its_line(path):
    count = 0
    for line_no, bad_text in _corruptions(path.read_text(encoding="utf-8")):
        with pytest.raises(ParseError) as err:
            parse(bad_text)
        assert err.value.line == line_no, (line_no, str(err.value))
        count += 1
    assert count > 20


def test_serialize_rejects_slice_inside_block():
    c, specs = parse("qutrits 1\ngate ch1 0\nassert superposition 0 plus\n")
    with pytest.raises(InputError):
        serialize(c.with_slices([("inner", 2)]), specs)
