"""Exact computations on Fano varieties of cyclic cubic fourfolds.

The heavy lifting lives in the compiled extension ``_core``; this package
re-exports its interface. Installed wheels place the extension inside the
package; development builds leave it on sys.path next to the build tree.
"""

try:
    from fanolab._core import (  # noqa: F401
        classify_germ,
        equivariance,
        gamma_type,
        lattice_table,
        milnor_number,
        plane_check,
        sample_instance,
        sigma_types,
        wall_row,
        __version__,
    )
except ImportError:
    from _core import (  # noqa: F401
        classify_germ,
        equivariance,
        gamma_type,
        lattice_table,
        milnor_number,
        plane_check,
        sample_instance,
        sigma_types,
        wall_row,
        __version__,
    )

__all__ = [
    "classify_germ",
    "equivariance",
    "gamma_type",
    "lattice_table",
    "milnor_number",
    "plane_check",
    "sample_instance",
    "sigma_types",
    "wall_row",
    "__version__",
]
