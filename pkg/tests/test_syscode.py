import pytest

from hqmap.bench import gen_nest
from hqmap.mapper import map_program
from hqmap.syscode import (
    BWD,
    FWD,
    GATE,
    ROUTE,
    SyscodeFormatError,
    classify_tag,
    parse_syscode,
)


def test_roundtrip_and_headers():
    sc = map_program(gen_nest(2, 2, 3)).system_code
    text = sc.to_text()
    lines = text.splitlines()
    assert lines[0] == "#hqmap-syscode v1"
    parsed = parse_syscode(text)
    assert parsed.records == list(sc.records())
    assert parsed.bus_bandwidth == sc.bus_bandwidth and parsed.swap_cycle_weight == 1
    assert parsed.meta["footprint"] == sc.meta["footprint"]
    assert sc.n_records() == len(parsed.records)


def test_classify():
    assert classify_tag("main:3") == GATE
    assert classify_tag("main:3/inc:1~r") == ROUTE
    assert classify_tag("main:3>1") == FWD
    assert classify_tag("main:3/inc:0/sub:2<0") == BWD
    assert classify_tag("main:3/inc:0") == GATE


@pytest.mark.parametrize("text", ["", "0 1 H 0 0 main:0", "#hqmap-syscode v1\n0 1 H 0 main:0",
                                  "#hqmap-syscode v1\n0 1 FOO 0 0 main:0"])
def test_malformed(text):
    with pytest.raises(SyscodeFormatError):
        parse_syscode(text)
