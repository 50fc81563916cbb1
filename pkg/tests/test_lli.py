"""Wire-format round trips and parse diagnostics."""

import pytest
from hypothesis import given, strategies as st

from latsurg.lli import (
    Basis,
    BoundaryRotate,
    ConditionalCorrection,
    Init,
    InitState,
    LliParseError,
    MeasureSingle,
    MultiBodyMeasure,
    OutcomeReference,
    RequestMagicState,
    SGate,
    TransversalHadamard,
    TransversalPauli,
    parse_lli,
    read_lli_stream,
    serialize_lli,
)
from latsurg.pauli import PauliOperator


class TestSpecExamples:
    def test_mbm_round_trip(self):
        instr = MultiBodyMeasure(((0, PauliOperator.Z), (3, PauliOperator.Z)), 1)
        assert serialize_lli(instr) == "MBM +Z0,Z3"
        assert parse_lli("MBM +Z0,Z3") == instr

    def test_init_round_trip(self):
        instr = Init(5, InitState.PLUS)
        assert serialize_lli(instr) == "INIT 5 +"
        assert parse_lli("INIT 5 +") == instr

    def test_malformed_mbm_names_line_and_token(self):
        with pytest.raises(LliParseError) as err:
            parse_lli("MBM Q9", line_number=7)
        assert "line 7" in str(err.value)
        assert "Q9" in str(err.value)


patches = st.integers(min_value=0, max_value=10**6)
ops_xyz = st.sampled_from(list(PauliOperator)).filter(lambda o: o is not PauliOperator.I)

simple_instructions = st.one_of(
    st.builds(Init, patches, st.sampled_from(list(InitState))),
    st.builds(MeasureSingle, patches, st.sampled_from(list(Basis))),
    st.builds(
        TransversalPauli, patches, st.sampled_from([PauliOperator.X, PauliOperator.Z])
    ),
    st.builds(TransversalHadamard, patches),
    st.builds(BoundaryRotate, patches),
    st.builds(SGate, patches),
    st.builds(RequestMagicState, patches),
    st.builds(
        MultiBodyMeasure,
        st.lists(st.tuples(patches, ops_xyz), min_size=2, max_size=5, unique_by=lambda t: t[0])
        .map(tuple),
        st.sampled_from([1, -1]),
    ),
)

instructions = st.recursive(
    simple_instructions,
    lambda inner: st.builds(
        ConditionalCorrection,
        st.builds(OutcomeReference, st.integers(0, 10**4), st.integers(0, 1)),
        inner,
    ),
    max_leaves=3,
)


@given(instructions)
def test_round_trip_is_identity(instr):
    assert parse_lli(serialize_lli(instr)) == instr


class TestStream:
    def test_comments_and_blanks_skipped(self):
        lines = ["# header", "", "INIT 0 +  # inline", "  ", "TH 0"]
        got = list(read_lli_stream(lines))
        assert got == [Init(0, InitState.PLUS), TransversalHadamard(0)]

    def test_error_carries_line_number(self):
        with pytest.raises(LliParseError) as err:
            list(read_lli_stream(["INIT 0 +", "BOGUS 1"]))
        assert err.value.line_number == 2

    def test_nested_conditionals(self):
        text = "IF 3=1 IF 5=0 TP X2"
        instr = parse_lli(text)
        assert isinstance(instr, ConditionalCorrection)
        assert isinstance(instr.body, ConditionalCorrection)
        assert serialize_lli(instr) == text


class TestValidation:
    def test_mbm_needs_two_patches(self):
        with pytest.raises(ValueError):
            MultiBodyMeasure(((0, PauliOperator.Z),), 1)

    def test_mbm_rejects_identity_operand(self):
        with pytest.raises(ValueError):
            MultiBodyMeasure(((0, PauliOperator.I), (1, PauliOperator.Z)), 1)

    def test_tp_rejects_y(self):
        with pytest.raises(ValueError):
            TransversalPauli(0, PauliOperator.Y)

    def test_parse_rejects_bad_basis(self):
        with pytest.raises(LliParseError):
            parse_lli("MEAS 0 Y")
