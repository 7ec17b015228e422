import json
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from opfunctors import fmod, samples, serialize
from opfunctors.operads import builtin

LIE = builtin("Lie", 6)


def same_module(F, G):
    if F.dims() != G.dims():
        return False
    for m in range(F.bound + 1):
        for n in range(F.bound + 1):
            for xi in F.basis_morphisms(m, n):
                if F.act(xi) != G.act(xi):
                    return False
    return True


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_roundtrip(seed):
    F = samples.random_module(LIE, random.Random(seed), 3)
    doc = json.loads(json.dumps(serialize.module_to_dict(F)))
    G = serialize.module_from_dict(doc, LIE)
    assert same_module(F, G)
    assert serialize.module_to_dict(G) == doc


def test_file_roundtrip(tmp_path):
    F = fmod.free_module(LIE, 2, 3)
    path = tmp_path / "m.json"
    serialize.dump_module(F, str(path))
    G = serialize.load_module(str(path), LIE)
    assert same_module(F, G)


def test_rejects_wrong_operad_and_format():
    doc = serialize.module_to_dict(fmod.free_module(LIE, 2, 2))
    with pytest.raises(fmod.ModuleError):
        serialize.module_from_dict(doc, builtin("Leib", 4))
    bad = dict(doc, format="other")
    with pytest.raises(fmod.ModuleError):
        serialize.module_from_dict(bad, LIE)


def test_rejects_inconsistent_symmetric_action():
    doc = serialize.module_to_dict(fmod.free_module(LIE, 2, 2))
    doc["sym"]["2"] = [[["1", "0"], ["0", "1"]]]
    with pytest.raises(fmod.ModuleError):
        serialize.module_from_dict(doc, LIE)


def test_bad_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "format": \n')
    with pytest.raises(fmod.ModuleError, match="line"):
        serialize.load_module(str(path), LIE)


def test_json_text_is_canonical():
    a = serialize.to_json_text({"b": 1, "a": [1, 2]})
    b = serialize.to_json_text({"a": [1, 2], "b": 1})
    assert a == b == '{"a":[1,2],"b":1}\n'
