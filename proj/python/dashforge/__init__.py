"""Dashboard config toolkit: generate, modify and render dashboards from a
JSON config that places chart, table and metric artifacts on a 3x3 grid."""

import json as _json
from pathlib import Path as _Path

from ._core import (
    DashforgeError,
    count_tokens,
    detect_intent,
    extract_modify_script,
    extract_result_files,
    run_cli,
    sha256_hex,
)
from . import _core

__all__ = [
    "DashforgeError",
    "apply_script",
    "canonicalize",
    "count_tokens",
    "detect_intent",
    "extract_modify_script",
    "extract_result_files",
    "generate_config",
    "gor",
    "render",
    "run_cli",
    "sha256_hex",
    "templates_dir",
    "validate",
]


def templates_dir():
    packaged = _Path(__file__).parent / "templates"
    return str(packaged if packaged.is_dir() else _core.default_templates())


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config, ensure_ascii=False)


def canonicalize(config):
    return _core.canonicalize(_text(config))


def validate(config, artifact_dir=".", templates=None):
    return _core.validate(_text(config), str(artifact_dir), templates or templates_dir())


def generate_config(files, template_id="dark", templates=None, title="", footnote="", font_color=""):
    return _core.generate_config(list(files), template_id, templates or templates_dir(), title, footnote, font_color)


def apply_script(config, script, files=(), templates=None):
    script_text = script if isinstance(script, str) else _json.dumps(script)
    return _core.apply_script(_text(config), script_text, list(files), templates or templates_dir())


def render(config, artifact_dir=".", templates=None):
    return _core.render(_text(config), str(artifact_dir), templates or templates_dir())


def gor(llm_output, dashboard_html):
    return _core.gor(llm_output, dashboard_html)
