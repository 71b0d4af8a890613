"""
Provides :class:`Config`, the key/value store of a JSON experiment config,
and :func:`parse_config`, which validates it into an :class:`ExperimentConfig`.

Example config (comments are allowed)::

    {
      "family": "gamma",
      "fixed_params": {"scale": 2},  // grid over the shape
      "parameter_grid": [1, 5, 10, 15, 20],
      "sample_sizes": [100, 200],
      "replicates": 10000
    }
"""

from __future__ import annotations

import os
import typing
from typing import Any, Dict, Optional, Union

from dispersia.errors import ConfigError
from dispersia.simulation.basic import ExperimentConfig

ExperimentKeys = (
    "family",
    "parameter_grid",
    "fixed_params",
    "sample_sizes",
    "replicates",
    "master_seed",
    "level",
    "sided",
    "grid_param",
    "true_distribution",
    "label",
)
LogKeys = ("log", "log_verbosity", "log_format")


class Config:
    """
    Reads in a JSON config file, and provides typed access to the key/value items.
    """

    def __init__(self, items=None):
        """
        :param dict[str]|None items: optional initial typed_dict
        """
        self.typed_dict = {}  # type: typing.Dict[str, typing.Any]
        self.files = []  # type: typing.List[str]
        if items is not None:
            self.typed_dict.update(items)

    def load_file(self, f):
        """
        Reads the configuration parameters from a file and adds them to the inner set of parameters.

        :param str|io.TextIOBase f: file name or stream
        """
        from dispersia.util.basic import load_json

        if isinstance(f, str):
            if not os.path.isfile(f):
                raise ConfigError("config file not found: %r" % f)
            self.files.append(f)
            content = load_json(filename=f)
        else:
            content = load_json(content=f.read())
        self.update(content)

    def has(self, key):
        """
        :param str key:
        :rtype: bool
        """
        return key in self.typed_dict

    def set(self, key, value):
        """
        :param str key:
        :param value:
        """
        self.typed_dict[key] = value

    def update(self, dikt):
        """
        :param dict[str] dikt:
        """
        for key, value in dikt.items():
            self.set(key, value)

    def typed_value(self, key, default=None, index=None):
        """
        :param str key:
        :param T default:
        :param int|None index:
        :rtype: T|typing.Any
        """
        value = self.typed_dict.get(key, default)
        if index is not None:
            if isinstance(value, (list, tuple)):
                value = value[index]
            elif index != 0:
                raise ConfigError("not a list, cannot take index %i" % index, key_path=key)
        return value

    def value(self, key, default, list_join_str=","):
        """
        :param str key:
        :param T default:
        :param str list_join_str:
        :return: string representation
        :rtype: str|T
        """
        if key not in self.typed_dict:
            return default
        value = self.typed_dict[key]
        if value is None:
            return default
        if isinstance(value, (list, tuple)):
            return list_join_str.join([str(v) for v in value])
        return str(value)

    def _typed(self, key, default, index, types, type_name):
        if key not in self.typed_dict:
            return default
        value = self.typed_value(key, default=default, index=index)
        if value is None:
            return default
        if isinstance(value, bool) and bool not in types or not isinstance(value, types):
            raise ConfigError("expected %s, got %r" % (type_name, value), key_path=key)
        return value

    def int(self, key, default, index=0):
        """
        :param str key:
        :param T default:
        :param int index:
        :rtype: int|T
        """
        return self._typed(key, default, index, (int,), "int")

    def float(self, key, default, index=0):
        """
        :param str key:
        :param T default:
        :param int index:
        :rtype: float|T
        """
        value = self._typed(key, default, index, (int, float), "number")
        return float(value) if value is not None else value

    def bool(self, key, default, index=0):
        """
        :param str key:
        :param T default:
        :param int index:
        :rtype: bool|T
        """
        if key in self.typed_dict and isinstance(self.typed_dict[key], str):
            from dispersia.util.basic import to_bool

            try:
                return to_bool(self.typed_dict[key])
            except ValueError as exc:
                raise ConfigError(str(exc), key_path=key) from exc
        return self._typed(key, default, index, (bool, int), "bool")

    def list(self, key, default=None):
        """
        :param str key:
        :param T default:
        :rtype: list|T
        """
        if default is None:
            default = []
        value = self.typed_dict.get(key)
        if value is None:
            return default
        if not isinstance(value, (tuple, list)):
            value = [value]
        return list(value)

    def int_list(self, key, default=None):
        """
        :param str key:
        :param T default:
        :rtype: list[int]|T
        """
        value = self.list(key, default)
        for i, x in enumerate(value):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ConfigError("expected int, got %r" % (x,), key_path="%s[%i]" % (key, i))
        return value

    def float_list(self, key, default=None):
        """
        :param str key:
        :param T default:
        :rtype: list[float]|T
        """
        value = self.list(key, default)
        for i, x in enumerate(value):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ConfigError("expected number, got %r" % (x,), key_path="%s[%i]" % (key, i))
        return [float(x) for x in value]


def experiment_config_from_dict(d: Dict[str, Any]) -> ExperimentConfig:
    """
    :param d: parsed JSON object
    """
    for key in d:
        if key not in ExperimentKeys and key not in LogKeys:
            raise ConfigError("unknown key", key_path=key)
    config = Config(d)
    family = config.typed_value("family")
    if family is None:
        raise ConfigError("required key missing", key_path="family")
    if not isinstance(family, str):
        raise ConfigError("expected string, got %r" % (family,), key_path="family")
    fixed_params = config.typed_value("fixed_params", {})
    if not isinstance(fixed_params, dict):
        raise ConfigError("expected object, got %r" % (fixed_params,), key_path="fixed_params")
    for key, value in fixed_params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError("expected number, got %r" % (value,), key_path="fixed_params.%s" % key)
    true_distribution = config.typed_value("true_distribution")
    if true_distribution is not None and not isinstance(true_distribution, dict):
        raise ConfigError("expected object, got %r" % (true_distribution,), key_path="true_distribution")
    for key in ("grid_param", "sided", "label"):
        if config.has(key) and not isinstance(config.typed_value(key), str):
            raise ConfigError("expected string, got %r" % (config.typed_value(key),), key_path=key)
    return ExperimentConfig(
        family=family,
        parameter_grid=tuple(config.float_list("parameter_grid")),
        fixed_params=dict(fixed_params),
        sample_sizes=tuple(config.int_list("sample_sizes")),
        replicates=config.int("replicates", 10000),
        master_seed=config.int("master_seed", 42),
        level=config.float("level", 0.05),
        sided=config.typed_value("sided", "two_sided_equal_tail"),
        grid_param=config.typed_value("grid_param"),
        true_distribution=true_distribution,
        label=config.typed_value("label"),
    )


def parse_config(path: Union[str, Config]) -> ExperimentConfig:
    """
    :param path: JSON file, or an already loaded config
    :return: validated experiment config. Schema violations raise :class:`ConfigError` with the key path.
    """
    if isinstance(path, Config):
        config = path
    else:
        config = Config()
        config.load_file(path)
    return experiment_config_from_dict(config.typed_dict)


def load_config(path: Optional[str]) -> Config:
    """
    :param path: JSON file or None
    :return: loaded (possibly empty) config
    """
    config = Config()
    if path:
        config.load_file(path)
    return config
