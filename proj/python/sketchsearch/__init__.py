"""Sketch-based search over app screen layouts."""

from ._core import (
    Hyperparams,
    Index,
    Recognizer,
    SketchSearchError,
    doodle_classes,
    element_classes,
    evaluate_search,
    generate_corpus,
    normalize_strokes,
    parse_sketch,
    tune,
)

__all__ = [
    "Hyperparams",
    "Index",
    "Recognizer",
    "SketchSearchError",
    "doodle_classes",
    "element_classes",
    "evaluate_search",
    "generate_corpus",
    "normalize_strokes",
    "parse_sketch",
    "tune",
]
