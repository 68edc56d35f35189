"""plancurv: curvature measures and DC calculus for planar unions.

A toolkit for compact planar sets given as finite unions of simple pieces
(convex polygons, disks, DC slabs, segments, points).  It computes the
curvature measures C0, C1, C2 by inclusion-exclusion over the intersection
lattice, classifies boundary cone types, certifies the DC-boundary
decomposition, and verifies integral-geometric identities (Gauss-Bonnet,
halfspace slicing, the kinematic formula) numerically.
"""

from .classify import (
    ConeType,
    UWDCVerdict,
    aura_eval,
    classify_piece_point,
    classify_point,
    exceptional_directions,
    uwdc_verdict,
    weak_regular_check,
)
from .curvature import (
    CurvatureTable,
    c0_var,
    curvature_region,
    curvature_scene,
    gauss_bonnet_check,
    slicing_identity_check,
    steiner_check,
)
from .dcfun import (
    ConvexPL,
    DCFun,
    SubdiffInterval,
    add,
    clarke_subdiff,
    lipschitz_constant,
    max2,
    min2,
    negate,
    scale,
    sorted_envelopes,
)
from .kinematic import (
    GammaTable,
    MCEstimate,
    Motion,
    calibrate_gammas,
    kinematic_lhs,
    kinematic_verify,
    motion_window,
    sample_motion,
)
from .planar import (
    Cone,
    EmbeddedGraph,
    Isometry,
    Polyline,
    angle,
    dc_certify,
    decompose_one_lipschitz,
    hausdorff,
    is_lipschitz_graph,
    realize,
    signed_turn,
    turn,
)
from .region import PolyRegion, clip_halfplane, euler_char, region_from_geometry
from .scene import (
    ConvexPolygon,
    Disk,
    PointPiece,
    Scene,
    Segment,
    Slab,
    check_generic,
    complement_components,
    intersect_lattice,
    polygonize,
    union_region,
)
from .sceneio import dump_scene, dumps_scene, load_scene, loads_scene

__version__ = "0.1.0"
