import math

import pytest

from fracmap.maps import MapFamily, MapSpec, eval_map


def test_logistic_values():
    f = MapSpec.logistic(2.4).as_callable()
    assert f(0.0) == 0.0
    assert f(1.0) == 0.0
    assert math.isclose(f(0.5), 0.6)


def test_puu_is_exactly_odd():
    f = MapSpec.puu(1.27).as_callable()
    for x in (0.2, 0.5, 0.1, 0.4, 0.731, 1e-3):
        assert f(-x) == -f(x)


def test_puu_value():
    # a*x - (a+1)*x^3
    assert math.isclose(eval_map(MapSpec.puu(1.27), 0.5), 1.27 * 0.5 - 2.27 * 0.125)


def test_from_name():
    spec = MapSpec.from_name(" PUU ", 1.27)
    assert spec.family is MapFamily.PUU
    assert spec.param == 1.27
    assert spec == MapSpec.puu(1.27)
    with pytest.raises(ValueError):
        MapSpec.from_name("custom", 1.0)
    with pytest.raises(ValueError):
        MapSpec.from_name("henon", 1.0)


def test_custom_map():
    spec = MapSpec.custom(lambda x: 2.0 * x, name="double")
    assert spec.label == "double"
    assert spec.as_callable()(3.0) == 6.0
    with pytest.raises(TypeError):
        MapSpec.custom("not callable")  # type: ignore[arg-type]


def test_with_param_keeps_family():
    spec = MapSpec.logistic(2.0).with_param(3.0)
    assert spec.family is MapFamily.LOGISTIC
    assert spec.param == 3.0
    assert spec.label == "logistic"


def test_eval_map_rejects_non_finite():
    with pytest.raises(ValueError):
        eval_map(MapSpec.logistic(2.0), float("nan"))
    with pytest.raises(ValueError):
        eval_map(MapSpec.logistic(2.0), float("inf"))
