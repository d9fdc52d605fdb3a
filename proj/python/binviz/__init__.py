"""Binary visualization and malware classification toolkit.

Thin wrapper over the native extension: byte streams become semantically
colored images (gray, byteclass, gradient, hilbert, entropy and the hybrid
HIT scheme), which feed a small CNN and classical baselines.
"""

from binviz._core import (
    BinvizError,
    CtnModel,
    build_partition_table,
    byte_to_rgb_hilbert,
    ctn_logits,
    encode,
    entropy_profile,
    evaluate,
    gen_synthetic_corpus,
    gist_descriptor,
    hilbert2d_d2xy,
    hilbert2d_xy2d,
    hilbert3d_point,
    knn_predict,
    raw_vector,
    render,
    render_file,
    shannon_entropy,
    svm_train,
    train_ctn,
    write_png,
)

__all__ = [
    "BinvizError",
    "CtnModel",
    "build_partition_table",
    "byte_to_rgb_hilbert",
    "ctn_logits",
    "encode",
    "entropy_profile",
    "evaluate",
    "gen_synthetic_corpus",
    "gist_descriptor",
    "hilbert2d_d2xy",
    "hilbert2d_xy2d",
    "hilbert3d_point",
    "knn_predict",
    "raw_vector",
    "render",
    "render_file",
    "shannon_entropy",
    "svm_train",
    "train_ctn",
    "write_png",
]

__version__ = "0.1.0"
