"""Ind-systems, pro-towers of ind-systems, their Homs and exact structures."""
from .extensions import (ExtensionTriple, compose_deflations, is_ind_locally_split, is_locally_split,
                         is_pro_locally_split, is_pro_locally_split_direct, is_split, pullback_deflation,
                         pushout_inflation)
from .fakeproduct import FakeProduct, embed_into_injective, fake_product, find_injectivity_counterexample
from .homs import HomResult, ind_hom, pro_hom, tail_reached
from .systems import STABILIZING, UNKNOWN, IndComplex, IndMorphism, ProIndComplex, ProIndMorphism, Window

__all__ = [
    "ExtensionTriple", "FakeProduct", "HomResult", "IndComplex", "IndMorphism", "ProIndComplex",
    "ProIndMorphism", "STABILIZING", "UNKNOWN", "Window", "compose_deflations", "embed_into_injective",
    "fake_product", "find_injectivity_counterexample", "ind_hom", "is_ind_locally_split", "is_locally_split",
    "is_pro_locally_split", "is_pro_locally_split_direct", "is_split", "pro_hom", "pullback_deflation",
    "pushout_inflation", "tail_reached",
]
