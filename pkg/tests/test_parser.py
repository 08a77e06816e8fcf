import random
from fractions import Fraction

import pytest

from sullivan.library import library
from sullivan.model import RandomModelParams, random_elliptic_model
from sullivan.parser import ModelSyntaxError, parse_model, print_model

S2_TEXT = "gen x 2\ngen y 3\nd y = x^2\n"

FIVE_GEN_TEXT = """\
# the coformal five-generator example
gen x1 2
gen x2 2
gen y1 3
gen y2 3
gen y3 3
d y1 = x1^2
d y2 = x1*x2
d y3 = x2^2
"""


def test_parse_even_sphere():
    m = parse_model(S2_TEXT)
    assert [(g.name, g.degree) for g in m.generators] == [("x", 2), ("y", 3)]
    assert m.d_of(1) == {(2, 0): Fraction(1)}
    assert m.validated and m.simply_connected


def test_parse_five_generator_example():
    m = parse_model(FIVE_GEN_TEXT)
    assert m.n_gens == 5
    assert m.d_of(2) == {(2, 0, 0, 0, 0): Fraction(1)}
    assert m.d_of(3) == {(1, 1, 0, 0, 0): Fraction(1)}
    assert m.d_of(4) == {(0, 2, 0, 0, 0): Fraction(1)}


def test_parse_degree_mismatch_reports_line():
    text = "gen x 2\ngen y 3\nd y = x\n"
    with pytest.raises(ModelSyntaxError) as err:
        parse_model(text)
    assert err.value.line == 3
    assert "degree mismatch" in str(err.value)


def test_parse_unknown_generator():
    with pytest.raises(ModelSyntaxError) as err:
        parse_model("gen x 2\nd x = z^2\n")
    assert "unknown generator 'z'" in str(err.value)
    assert err.value.line == 2


def test_parse_non_triangular_reference():
    text = "gen y 3\ngen x 2\nd y = x^2\n"
    with pytest.raises(ModelSyntaxError) as err:
        parse_model(text)
    assert "non-triangular" in str(err.value)


def test_parse_bad_character_has_column():
    with pytest.raises(ModelSyntaxError) as err:
        parse_model("gen x 2\ngen y 3\nd y = x@2\n")
    assert err.value.line == 3 and err.value.column == 8


def test_parse_redeclaration():
    with pytest.raises(ModelSyntaxError) as err:
        parse_model("gen x 2\ngen x 4\n")
    assert "redeclared" in str(err.value)


def test_parse_odd_square_rejected():
    with pytest.raises(ModelSyntaxError) as err:
        parse_model("gen u 3\ngen x 2\ngen w 7\nd w = u^2*x\n")
    assert "squared" in str(err.value)


def test_parse_double_definition():
    with pytest.raises(ModelSyntaxError) as err:
        parse_model("gen x 2\ngen y 3\nd y = x^2\nd y = x^2\n")
    assert "defined twice" in str(err.value)


def test_parse_rational_coefficients():
    m = parse_model("gen x 2\ngen y 3\nd y = 1/2*x^2\n")
    assert m.d_of(1) == {(2, 0): Fraction(1, 2)}


def test_parse_signs_and_sums():
    m = parse_model("gen x1 2\ngen x2 2\ngen y 3\nd y = -x1^2 + 2*x1*x2 - x2^2\n")
    assert m.d_of(2) == {
        (2, 0, 0): Fraction(-1),
        (1, 1, 0): Fraction(2),
        (0, 2, 0): Fraction(-1),
    }


def test_parse_comments_and_blank_lines():
    text = "# heading\n\ngen x 2  # inline\n\ngen y 3\nd y = x^2 # trailing\n"
    m = parse_model(text)
    assert m.n_gens == 2


def test_parse_empty_model_rejected():
    with pytest.raises(ModelSyntaxError):
        parse_model("# nothing here\n")


def test_roundtrip_library():
    for m in library():
        again = parse_model(print_model(m), name=m.name)
        assert again == m, m.name


def test_roundtrip_random_models():
    shapes = [
        RandomModelParams(1, 2, 2),
        RandomModelParams(2, 2, 2),
        RandomModelParams(2, 3, 2),
        RandomModelParams(1, 2, 3, leading_odd_sphere=True),
    ]
    for seed in range(12):
        m = random_elliptic_model(seed, shapes[seed % len(shapes)])
        assert parse_model(print_model(m), name=m.name) == m


def test_roundtrip_fuzzed_coefficients():
    rng = random.Random(55)
    for _ in range(30):
        c1 = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
        c2 = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
        op = "-" if c2 < 0 else "+"
        text = (
            "gen x1 2\ngen x2 2\ngen y 3\n"
            f"d y = {c1}*x1^2 {op} {abs(c2)}*x1*x2\n"
        )
        m = parse_model(text)
        assert parse_model(print_model(m)) == m
        assert m.d_of(2)[(1, 1, 0)] == c2
