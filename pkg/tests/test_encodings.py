from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collatz_tm.core import Configuration, Tape
from collatz_tm.encodings import Numeral, Representation, checkpoint, decode, encode, template, theorem1_target
from collatz_tm.errors import DomainError, InvalidInputError

REPS = list(Representation)


class TestEncode:
    def test_examples(self):
        assert encode(5, "base3") == "12"
        assert encode(5, "unary") == "11111"
        # 6 = 110b, least significant bit first
        assert encode(6, "binary-pair") == "101111"

    @pytest.mark.parametrize("rep", REPS)
    def test_rejects_non_positive(self, rep):
        for bad in (0, -3):
            with pytest.raises(DomainError):
                encode(bad, rep)

    def test_unknown_representation(self):
        with pytest.raises(ValueError):
            encode(3, "base7")


class TestDecode:
    def test_leading_zeros(self):
        assert decode("0012", "base3") == 5

    @pytest.mark.parametrize(
        "word, rep",
        [("", "base3"), ("000", "base3"), ("13", "base3"), ("1x1", "unary"),
         ("101", "binary-pair"), ("0111", "binary-pair"), ("1012", "binary-pair"), ("1010", "binary-pair")],
    )
    def test_rejects(self, word, rep):
        with pytest.raises(InvalidInputError):
            decode(word, rep)

    @given(st.integers(1, 10**30), st.integers(0, 5))
    def test_base3_padding(self, n, zeros):
        assert decode("0" * zeros + encode(n, "base3"), "base3") == n

    @pytest.mark.parametrize("rep", REPS)
    @given(n=st.integers(1, 10**6))
    def test_round_trip(self, rep, n):
        assert decode(encode(n, rep), rep) == n

    def test_numeral(self):
        assert Numeral.of(4, "binary-pair").word == "101011"


class TestTemplates:
    def test_base3_reads_at_left_end(self):
        c = Configuration(Tape("0012", 0, "b"), 0, "A")
        assert checkpoint(template("base3-pass"), c) == 5
        assert checkpoint(template("base3-pass"), Configuration(c.tape, 1, "A")) is None
        assert checkpoint(template("base3-pass"), Configuration(c.tape, 0, "B")) is None

    def test_unary_ignores_residue(self):
        c = Configuration(Tape("xaa111", 0, "b"), 3, "A")
        assert checkpoint(template("unary-block"), c) is None
        c = Configuration(Tape("xabb111", 0, "b"), 4, "A")
        assert checkpoint(template("unary-block"), c) == 3

    def test_binary_pair(self):
        c = Configuration(Tape("101011", 0, "0"), 0, "A")
        assert checkpoint(template("binary-pair"), c) == 4

    def test_theorem1_target(self):
        assert theorem1_target(Configuration(Tape("0001", 0, "b"), 3, "A")) == 3
        assert theorem1_target(Configuration(Tape("1", 0, "b"), 0, "A")) == 0
        assert theorem1_target(Configuration(Tape("0011", 0, "b"), 2, "A")) is None
        assert theorem1_target(Configuration(Tape("0201", 0, "b"), 3, "A")) is None
        assert theorem1_target(Configuration(Tape("01", 0, "b"), 1, "C")) is None
