"""Python bindings for the stratkit library."""

import json

from . import _stratkit
from ._stratkit import ParseError, TranslationError, format_formula, hf_eval, normalize_obj, v_stage

__all__ = [
    "ParseError",
    "TranslationError",
    "ast",
    "build_iso",
    "classify",
    "embedding_family",
    "format_formula",
    "hf_eval",
    "normalize_obj",
    "run_cli",
    "self_embedding",
    "stratify",
    "translate",
    "v_stage",
]


def ast(text, signature="permissive"):
    return json.loads(_stratkit.ast_json(text, signature))


def stratify(text, typed=False):
    return json.loads(_stratkit.stratify_json(text, typed))


def classify(text):
    return json.loads(_stratkit.classify_json(text))


def translate(text):
    return json.loads(_stratkit.translate_json(text))


def build_iso(steps=200):
    return json.loads(_stratkit.build_iso_json(steps))


def self_embedding(bound="0", steps=300):
    return json.loads(_stratkit.self_embedding_json(bound, steps))


def embedding_family(depth=3, steps=300):
    return json.loads(_stratkit.embedding_family_json(depth, steps))


def run_cli(*args):
    """Runs a CLI command in process and returns (exit code, stdout, stderr)."""
    return _stratkit.run_cli(list(args))
