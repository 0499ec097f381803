"""Config-file and path-description parsing for the command-line runner.

Config files are INI-style with explicit units on every physical value
("t_f = 58.5 us"). Unknown sections or keys are rejected so a typo cannot
silently fall back to a default.
"""

from __future__ import annotations

import configparser
import math
import re

from .constants import K_B
from .trajectory import PathKind, SegmentSpec


class ConfigError(Exception):
    """Bad configuration input; carries the offending key path."""

    def __init__(self, key: str, message: str):
        self.key = key
        self.message = message
        super().__init__(f"{key}: {message}")


# Multipliers to SI. Frequencies convert to angular [rad/s]; depths and
# depth-like fluctuations convert through k_B to joules.
_UNIT_TABLES = {
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9},
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "speed": {"m/s": 1.0, "mm/s": 1e-3, "um/s": 1e-6},
    "temperature": {"K": 1.0, "mK": 1e-3, "uK": 1e-6},
    "depth": {"J": 1.0, "K": K_B, "mK": K_B * 1e-3, "uK": K_B * 1e-6},
    "frequency": {"rad/s": 1.0, "Hz": 2.0 * math.pi, "kHz": 2.0 * math.pi * 1e3},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
}

_QUANTITY_RE = re.compile(r"^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*([A-Za-z/]*)\s*$")


def parse_quantity(text: str, kind: str, key: str) -> float:
    """Parse "value unit" into SI using the unit table for `kind`."""
    table = _UNIT_TABLES[kind]
    m = _QUANTITY_RE.match(text)
    if m is None:
        raise ConfigError(key, f"cannot parse quantity {text!r}")
    value, unit = m.group(1), m.group(2)
    if not unit:
        raise ConfigError(key, f"missing unit on {text!r} (expected one of {sorted(table)})")
    if unit not in table:
        raise ConfigError(key, f"unknown {kind} unit {unit!r} (expected one of {sorted(table)})")
    try:
        return float(value) * table[unit]
    except ValueError:
        raise ConfigError(key, f"bad number {value!r}") from None


def _parse_int(text, key):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(key, f"expected integer, got {text!r}") from None


def _parse_bool(text, key):
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ConfigError(key, f"expected boolean, got {text!r}")


def _parse_choice(choices):
    def parse(text, key):
        t = text.strip().lower()
        if t not in choices:
            raise ConfigError(key, f"expected one of {sorted(choices)}, got {text!r}")
        return t

    return parse


def _parse_quantity_list(kind):
    def parse(text, key):
        items = [part.strip() for part in text.split(",") if part.strip()]
        if not items:
            raise ConfigError(key, "empty list")
        return tuple(parse_quantity(item, kind, key) for item in items)

    return parse


def _q(kind):
    return lambda text, key: parse_quantity(text, kind, key)


def _string(text, key):
    return text.strip()


# section -> key -> parser. This is the complete config surface.
_SCHEMA = {
    "trap": {
        "depth": _q("depth"),
        "width": _q("length"),
        "waist": _q("length"),
        "frequency": _q("frequency"),
        "variant": _parse_choice({"gaussian", "truncated-harmonic"}),
    },
    "ensemble": {
        "temperature": _q("temperature"),
        "samples": _parse_int,
        "depth_fluctuation": _q("depth"),
        "include_axial_energy": _parse_bool,
        "seed": _parse_int,
    },
    "run": {
        "out": _string,
        "workers": _parse_int,
        "settle_hold": _q("time"),
    },
    "path": {
        "file": _string,
        "segments": _string,
    },
    "sweep": {
        "t_f_min": _q("time"),
        "t_f_max": _q("time"),
        "t_f_count": _parse_int,
        "l_min": _q("length"),
        "l_max": _q("length"),
        "l_count": _parse_int,
    },
    "scaling": {
        "t_f": _parse_quantity_list("time"),
    },
}


def load_config(path: str | None = None, text: str | None = None) -> dict:
    """Read an INI config into a nested dict of resolved SI values.

    Either a file path or literal text. Returns {section: {key: value}} with
    only the sections/keys present in the input; callers layer scenario
    defaults underneath.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        if text is not None:
            parser.read_string(text)
        elif path is not None:
            with open(path) as fh:
                parser.read_file(fh)
        else:
            return {}
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path!r}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError("config", f"parse error: {exc}") from None

    out: dict = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(section, f"unknown section (expected one of {sorted(_SCHEMA)})")
        schema = _SCHEMA[section]
        for key, raw in parser.items(section):
            if key not in schema:
                raise ConfigError(
                    f"{section}.{key}", f"unknown key (expected one of {sorted(schema)})"
                )
            out.setdefault(section, {})[key] = schema[key](raw, f"{section}.{key}")
    return out


# ---------------------------------------------------------------------------
# Path description files: one segment per line, e.g.
#
#   sta   distance=12.6um  t_f=31.5us  v_i=0m/s  v_f=0.3m/s
#   sta   radius=25.2um    theta=90deg t_f=93.7us
#   cv    distance=12.6um  t_f=58.5us
#   hold  t_f=100us
#
# Values glue the number to its unit so a token is one key=value field.
# Signed theta turns left (+) or right (-).

_KINDS = {
    "sta": PathKind.STA,
    "cv": PathKind.CONST_VELOCITY,
    "cj": PathKind.CONST_JERK,
    "const-angular": PathKind.CONST_ANGULAR,
}

_FIELD_KINDS = {
    "distance": "length",
    "radius": "length",
    "theta": "angle",
    "t_f": "time",
    "v_i": "speed",
    "v_f": "speed",
}

_TOKEN_RE = re.compile(r"\S+")
_FIELD_RE = re.compile(r"^([a-z_]+)=([-+0-9.eE]+)([A-Za-z/]*)$")


class PathParseError(ConfigError):
    """Path description syntax error with line/column position."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        super().__init__(f"path:{line}:{column}", message)


def parse_path_text(text: str) -> list[SegmentSpec]:
    """Parse a path description into segment specs (holds become zero-length cv)."""
    specs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        tokens = list(_TOKEN_RE.finditer(body))
        if not tokens:
            continue
        head = tokens[0]
        kind_word = head.group(0).lower()
        col0 = head.start() + 1
        fields = {}
        for tok in tokens[1:]:
            m = _FIELD_RE.match(tok.group(0))
            if m is None:
                raise PathParseError(lineno, tok.start() + 1, f"bad field {tok.group(0)!r}")
            name, number, unit = m.groups()
            if name not in _FIELD_KINDS:
                raise PathParseError(
                    lineno, tok.start() + 1, f"unknown field {name!r} (expected one of {sorted(_FIELD_KINDS)})"
                )
            if name in fields:
                raise PathParseError(lineno, tok.start() + 1, f"duplicate field {name!r}")
            try:
                fields[name] = parse_quantity(f"{number} {unit}", _FIELD_KINDS[name], name)
            except ConfigError as exc:
                raise PathParseError(lineno, tok.start() + 1, exc.message) from None

        if "t_f" not in fields:
            raise PathParseError(lineno, col0, "segment needs t_f")
        t_f = fields.pop("t_f")

        if kind_word == "hold":
            if fields:
                raise PathParseError(lineno, col0, "hold takes only t_f")
            specs.append(SegmentSpec(PathKind.CONST_VELOCITY, t_f=t_f, distance=0.0))
            continue
        if kind_word not in _KINDS:
            raise PathParseError(
                lineno, col0, f"unknown segment kind {kind_word!r} (expected one of {sorted(_KINDS) + ['hold']})"
            )
        kind = _KINDS[kind_word]

        straight = "distance" in fields
        curved = "radius" in fields or "theta" in fields
        if straight and curved:
            raise PathParseError(lineno, col0, "give distance or radius+theta, not both")
        if curved and not ("radius" in fields and "theta" in fields):
            raise PathParseError(lineno, col0, "curved segment needs both radius and theta")
        if not straight and not curved:
            raise PathParseError(lineno, col0, "segment needs distance or radius+theta")
        if kind is PathKind.CONST_ANGULAR and not curved:
            raise PathParseError(lineno, col0, "const-angular is a curved kind")
        if kind in (PathKind.CONST_VELOCITY, PathKind.CONST_JERK) and curved:
            raise PathParseError(lineno, col0, f"{kind_word} is a straight kind")
        v_i = fields.pop("v_i", 0.0)
        v_f = fields.pop("v_f", 0.0)
        if kind is not PathKind.STA and (v_i != 0.0 or v_f != 0.0):
            raise PathParseError(lineno, col0, f"{kind_word} does not take endpoint speeds")

        specs.append(
            SegmentSpec(
                kind,
                t_f=t_f,
                distance=fields.get("distance"),
                radius=fields.get("radius"),
                theta_f=fields.get("theta"),
                v_i=v_i,
                v_f=v_f,
            )
        )
    if not specs:
        raise PathParseError(1, 1, "no segments in path description")
    return specs


def parse_path_file(path: str) -> list[SegmentSpec]:
    try:
        with open(path) as fh:
            return parse_path_text(fh.read())
    except OSError as exc:
        raise ConfigError("path.file", f"cannot read {path!r}: {exc}") from None
