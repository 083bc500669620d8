"""Model-structure predicates on pro-ind supercomplexes."""
from .classify import MorphismClass, classify, is_cofibration, is_fibration
from .strictify import RActionTower, StrictifyResult, forget, shift_action, strictify
from .local import (EquivalenceDatum, as_pro, as_pro_map, assemble_cone_nullhomotopy, bracket, cone_tower,
                    cycles_extension, homology_vanishes, is_exact_locally_split, is_local_equivalence_direct,
                    is_local_equivalence_via_cone, is_locally_contractible)

__all__ = [
    "MorphismClass", "RActionTower", "StrictifyResult", "forget", "shift_action", "strictify", "classify", "is_cofibration", "is_fibration",
    "EquivalenceDatum", "as_pro", "as_pro_map", "assemble_cone_nullhomotopy", "bracket", "cone_tower",
    "cycles_extension", "homology_vanishes", "is_exact_locally_split", "is_local_equivalence_direct",
    "is_local_equivalence_via_cone", "is_locally_contractible",
]
