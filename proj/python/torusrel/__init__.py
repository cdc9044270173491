"""Bounded-degree relation certificates for torus-invariant subrings."""

try:
    from . import _torusrel as _core  # installed wheel layout
except ImportError:  # in-tree builds put the extension on sys.path directly
    import _torusrel as _core

Rep = _core.Rep
load_rep = _core.load_rep
make_rep = _core.make_rep
default_radius = _core.default_radius
bounds = _core.bounds
generators = _core.generators
decompose = _core.decompose
verify = _core.verify
rearrange = _core.rearrange
fibers = _core.fibers
markov_degree = _core.markov_degree

Error = _core.Error
ConfigError = _core.ConfigError
ConeError = _core.ConeError
ResourceCapError = _core.ResourceCapError
NotARelationError = _core.NotARelationError
DecompositionError = _core.DecompositionError

__version__ = _core.__version__

__all__ = [
    "Rep",
    "load_rep",
    "make_rep",
    "default_radius",
    "bounds",
    "generators",
    "decompose",
    "verify",
    "rearrange",
    "fibers",
    "markov_degree",
    "Error",
    "ConfigError",
    "ConeError",
    "ResourceCapError",
    "NotARelationError",
    "DecompositionError",
    "__version__",
]
