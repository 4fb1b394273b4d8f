"""JSON persistence for trained models.

The file stores layer sizes, row-major weight matrices, biases, and the
input/output normalization constants.  Floats are written with full repr
precision so a load reproduces the model bit for bit.
"""

import json

import numpy as np

from .mlp import Mlp, Normalizer

FORMAT_VERSION = 1


def _norm_to_dict(norm: Normalizer):
    return {"mean": norm.mean.tolist(), "sd": norm.sd.tolist()}


def _norm_from_dict(d) -> Normalizer:
    return Normalizer(mean=np.array(d["mean"], dtype=np.float64), sd=np.array(d["sd"], dtype=np.float64))


def save_model(path, model: Mlp) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "hidden_activation": "sigmoid",
        "layer_sizes": model.layer_sizes,
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "input_norm": _norm_to_dict(model.input_norm),
        "output_norm": _norm_to_dict(model.output_norm),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path) -> Mlp:
    with open(path) as fh:
        doc = json.load(fh)
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError("unsupported model format version: %r" % (version,))
    weights = [np.array(w, dtype=np.float64) for w in doc["weights"]]
    biases = [np.array(b, dtype=np.float64) for b in doc["biases"]]
    model = Mlp(
        weights,
        biases,
        input_norm=_norm_from_dict(doc["input_norm"]),
        output_norm=_norm_from_dict(doc["output_norm"]),
    )
    if model.layer_sizes != list(doc["layer_sizes"]):
        raise ValueError("layer_sizes does not match the stored matrices")
    return model
