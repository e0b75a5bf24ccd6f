import json
import logging

import pytest
from pydantic import ValidationError

from app.core.config import Settings
from app.core.exceptions import CapacityError, InfeasibleHorizonError, ParameterCountError
from app.core.logging_config import LOGGER_NAME, setup_logging
from app.helpers.utils import derive_int_seed, derive_rng, read_json, write_json


def test_settings_defaults():
    config = Settings(_env_file=None)
    assert config.PATTERN_SPACE_CAP == 2_000_000
    assert config.SPSA_ALPHA == 0.602
    assert config.SPSA_GAMMA == 0.101


def test_settings_read_the_environment(monkeypatch):
    monkeypatch.setenv("MAX_EXACT_VARIABLES", "12")
    assert Settings(_env_file=None).MAX_EXACT_VARIABLES == 12


def test_settings_validation(monkeypatch):
    monkeypatch.setenv("MAX_EXACT_VARIABLES", "64")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)


def test_errors_serialize_to_dicts():
    err = ParameterCountError(expected=3, got=2, modes=4, loops=1)
    assert err.to_dict()["error"] == "ParameterCountError"
    assert "3" in err.to_dict()["message"]
    assert isinstance(CapacityError("too big"), ValueError)
    assert "cupcakes" in str(InfeasibleHorizonError(job="cupcakes", operation=1, t_max=2))


def test_setup_logging_attaches_handlers_once():
    first = setup_logging()
    handlers = list(first.handlers)
    again = setup_logging()
    assert first is again is logging.getLogger(LOGGER_NAME)
    assert again.handlers == handlers
    assert not again.propagate


def test_derived_streams_are_independent_of_creation_order():
    a = derive_rng(5, 1, 2).random(3)
    derive_rng(5, 9).random(100)
    b = derive_rng(5, 1, 2).random(3)
    assert (a == b).all()
    assert (derive_rng(5, 1, 3).random(3) != a).any()
    assert derive_int_seed(5, 1) == derive_int_seed(5, 1)


def test_json_helpers(tmp_path):
    path = write_json(tmp_path / "nested" / "out.json", {"b": 1, "a": [1, 2]})
    assert read_json(path) == {"a": [1, 2], "b": 1}
    assert json.loads(path.read_text()) == {"a": [1, 2], "b": 1}
    with pytest.raises(OSError) as err:
        read_json(tmp_path / "missing.json")
    assert "missing.json" in str(err.value)
