import json

import pytest
from hypothesis import given, settings, strategies as st

from loccdisc import families as fam
from loccdisc import jsonio
from loccdisc.engine import verify_perfect
from loccdisc.linalg import Ket
from loccdisc.protocols import build_protocol, states_for

amp = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(st.dictionaries(st.tuples(st.integers(1, 4), st.integers(1, 5)), amp, max_size=6))
@settings(max_examples=40)
def test_ket_round_trip(amps):
    k = Ket(fam.bipartite_layout(4, 5), amps)
    assert jsonio.ket_from_json(json.loads(jsonio.dumps(jsonio.ket_to_json(k)))) == k


@pytest.mark.parametrize("family,dims", [(fam.BIPARTITE, (4, 6)), (fam.TRIPARTITE_EXAMPLE, ()),
                                         (fam.EVEN, (4, 5, 4, 5)), (fam.ODD, (4, 5, 6, 4, 5))])
def test_set_round_trip(family, dims):
    s = fam.build(family, dims)
    back = jsonio.set_from_json(json.loads(jsonio.dumps(jsonio.set_to_json(s))))
    assert back == s


@pytest.mark.parametrize("theorem,dims", [("1", (4, 5)), ("example456", ()), ("4", (4, 5, 6, 4, 5))])
def test_protocol_round_trip(theorem, dims):
    p = build_protocol(theorem, dims)
    doc = jsonio.protocol_to_json(p)
    back = jsonio.protocol_from_json(json.loads(jsonio.dumps(doc)))
    assert back == p
    assert jsonio.dumps(jsonio.protocol_to_json(back)) == jsonio.dumps(doc)
    assert verify_perfect(back, states_for(back), True).perfect


def test_schema_errors_name_the_path():
    doc = jsonio.set_to_json(fam.bipartite_set(4, 5))
    doc["states"][3]["ket"]["amps"][0][-1] = 0
    with pytest.raises(jsonio.SchemaError, match=r"\$\.states\[3\]\.ket\.amps\[0\]"):
        jsonio.set_from_json(doc)
    doc = jsonio.protocol_to_json(build_protocol("1", (4, 5)))
    doc["root"]["children"]["B1"]["outcomes"][0]["matrix"][0][2] = 0.5
    with pytest.raises(jsonio.SchemaError, match=r"\$\.root\.children\.B1\.outcomes\[0\]\.matrix\[0\]\[2\]"):
        jsonio.protocol_from_json(doc)
    with pytest.raises(jsonio.SchemaError, match="schema"):
        jsonio.protocol_from_json({"schema": 2})


def test_probabilities_are_fraction_strings():
    p = build_protocol("1", (4, 5))
    doc = jsonio.report_to_json(verify_perfect(p, states_for(p), True))
    assert doc["states"][0]["accepted"] == "1/5"

    def no_floats(x):
        raise AssertionError(f"float in output: {x}")

    json.loads(jsonio.dumps(doc), parse_float=no_floats)
