"""Feature-adapted triangulations of scalar images.

Images are 2-D float arrays indexed ``[y, x]``. A typical run::

    import gridadapt as ga
    img = ga.synth("circle", 128, sigma=0.3, seed=1)
    adapted = ga.adapt(img, nodes=100, method="robust", lam=0.4)
    dual = ga.dual(adapted)
    ga.recall(dual, ga.contour("circle", 128), percentile=90)
"""

from ._core import (
    Adapted,
    Dual,
    EvaluationError,
    Graph,
    IntegrityError,
    IoError,
    ParameterError,
    RangeError,
    __version__,
    adapt,
    contour,
    distance_transform,
    dual,
    export_gdl,
    gdl_record,
    load_image,
    recall,
    render_svg,
    save_image,
    synth,
    triangulation,
)
from .gdl import GdlRecord, read_jsonl

__all__ = [
    "Adapted", "Dual", "EvaluationError", "GdlRecord", "Graph", "IntegrityError", "IoError",
    "ParameterError", "RangeError", "__version__", "adapt", "contour", "distance_transform",
    "dual", "export_gdl", "gdl_record", "load_image", "read_jsonl", "recall", "render_svg",
    "save_image", "synth", "triangulation",
]
