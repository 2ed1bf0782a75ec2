"""Flat `key = value` experiment configs with [section] headers.

    name = dimer-quench
    N = 128
    boundary = periodic

    [initial_state]
    kind = dimer
    delta = 0.5

    [blocks]
    kind = explicit
    blocks = 0:8, 10:20+30:40

Lists are comma separated; an explicit block joins its intervals with '+'.
Lines starting with '#' are comments.
"""

import logging
from collections.abc import Iterable

from pydantic import ValidationError

from entlinks.exceptions import ConfigError
from entlinks.models.experiment import DEFER_CONSISTENCY, ConfigIssue, ExperimentConfig, validation_message

logger = logging.getLogger(__name__)

TOP_LEVEL = ""
SECTIONS = ("initial_state", "quench", "times", "blocks", "outputs", "wave")
TOP_KEYS = ("name", "N", "boundary", "seed")
FLOAT_LISTS = {("initial_state", "values"), ("quench", "values")}
INT_LISTS = {("blocks", "sizes")}
BLOCK_LISTS = {("blocks", "blocks")}

# raw[section][key] = (text, line); overrides carry line None
RawConfig = dict[str, dict[str, tuple[str, int | None]]]


def _split_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _parse_blocks(text: str) -> list[list[tuple[int, int]]]:
    blocks = []
    for block in _split_list(text):
        intervals = []
        for piece in block.split("+"):
            start, sep, stop = piece.strip().partition(":")
            if not sep:
                raise ValueError(f"interval '{piece.strip()}' is not of the form a:b")
            intervals.append((int(start), int(stop)))
        blocks.append(intervals)
    return blocks


def read_raw(text: str) -> tuple[RawConfig, dict[str, int], list[ConfigIssue]]:
    """Split text into raw values per section, with header line numbers."""
    raw: RawConfig = {TOP_LEVEL: {}}
    headers: dict[str, int] = {}
    issues: list[ConfigIssue] = []
    section = TOP_LEVEL

    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            if section not in SECTIONS:
                issues.append(ConfigIssue(line=number, key=section, message="unknown section"))
            elif section in headers:
                issues.append(
                    ConfigIssue(
                        line=number,
                        key=section,
                        message=f"duplicate section (lines {headers[section]} and {number})",
                    )
                )
            headers.setdefault(section, number)
            raw.setdefault(section, {})
            continue

        key, sep, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            issues.append(ConfigIssue(line=number, key=stripped, message="expected 'key = value'"))
            continue
        if not value:
            issues.append(ConfigIssue(line=number, key=_dotted(section, key), message="missing value"))
            continue
        entries = raw.setdefault(section, {})
        if key in entries:
            first = entries[key][1]
            issues.append(
                ConfigIssue(
                    line=number,
                    key=_dotted(section, key),
                    message=f"duplicate key (lines {first} and {number})",
                )
            )
            continue
        entries[key] = (value, number)
    return raw, headers, issues


def _dotted(section: str, key: str) -> str:
    return f"{section}.{key}" if section else key


def apply_overrides(raw: RawConfig, overrides: Iterable[str]) -> list[ConfigIssue]:
    """Apply `key=value` / `section.key=value` overrides in place."""
    issues = []
    for override in overrides:
        target, sep, value = override.partition("=")
        target, value = target.strip(), value.strip()
        if not sep or not target or not value:
            issues.append(ConfigIssue(key=override, message="override must be key=value"))
            continue
        section, _, key = target.rpartition(".")
        if section and section not in SECTIONS:
            issues.append(ConfigIssue(key=target, message="unknown section"))
            continue
        raw.setdefault(section, {})[key] = (value, None)
        logger.info("Override %s = %s", target, value)
    return issues


def _typed_values(raw: RawConfig) -> tuple[dict, list[ConfigIssue]]:
    data: dict = {}
    issues = []
    for section, entries in raw.items():
        target = data if section == TOP_LEVEL else data.setdefault(section, {})
        for key, (text, line) in entries.items():
            try:
                if (section, key) in FLOAT_LISTS or (section, key) in INT_LISTS:
                    value = _split_list(text)
                elif (section, key) in BLOCK_LISTS:
                    value = _parse_blocks(text)
                else:
                    value = text
            except ValueError as exc:
                issues.append(ConfigIssue(line=line, key=_dotted(section, key), message=str(exc)))
                continue
            target[key] = value
    return data, issues


def _locate(loc: tuple, raw: RawConfig, headers: dict[str, int]) -> tuple[int | None, str]:
    parts = [str(part) for part in loc]
    if not parts:
        line = raw[TOP_LEVEL].get("N", (None, None))[1]
        return line, "config"
    if parts[0] in SECTIONS:
        section = parts[0]
        if len(parts) > 1 and parts[1] in raw.get(section, {}):
            return raw[section][parts[1]][1], f"{section}.{parts[1]}"
        if len(parts) > 1:
            return headers.get(section), f"{section}.{parts[1]}"
        return headers.get(section), section
    entry = raw[TOP_LEVEL].get(parts[0])
    return (entry[1] if entry else None), parts[0]


def parse_config(text: str, overrides: Iterable[str] = ()) -> ExperimentConfig:
    """Validate a config, collecting every problem before failing.

    Raises ConfigError listing all issues with their line numbers.
    """
    raw, headers, issues = read_raw(text)
    issues += apply_overrides(raw, overrides)
    data, conversion_issues = _typed_values(raw)
    issues += conversion_issues

    try:
        cfg = ExperimentConfig.model_validate(data, context={DEFER_CONSISTENCY: True})
    except ValidationError as exc:
        for error in exc.errors():
            line, key = _locate(error["loc"], raw, headers)
            message = "unknown key" if error["type"] == "extra_forbidden" else validation_message(error)
            issues.append(ConfigIssue(line=line, key=key, message=message))
        cfg = None
    else:
        for loc, message in cfg.consistency_issues():
            line, key = _locate(loc, raw, headers)
            issues.append(ConfigIssue(line=line, key=key, message=message))

    if issues:
        issues.sort(key=lambda issue: (issue.line is None, issue.line or 0))
        raise ConfigError(issues)
    return cfg


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ", ".join("+".join(f"{a}:{b}" for a, b in block) for block in value)
        return ", ".join(_format_value(item) for item in value)
    if hasattr(value, "value"):
        return str(value.value)
    return repr(value) if isinstance(value, float) else str(value)


def format_config(cfg: ExperimentConfig) -> str:
    """Serialize a config so that parse_config reproduces it."""
    lines = [f"{key} = {_format_value(getattr(cfg, key))}" for key in TOP_KEYS]
    for section in SECTIONS:
        lines.append("")
        lines.append(f"[{section}]")
        model = getattr(cfg, section)
        for key in type(model).model_fields:
            value = getattr(model, key)
            if value is not None and value != ():
                lines.append(f"{key} = {_format_value(value)}")
    return "\n".join(lines) + "\n"
