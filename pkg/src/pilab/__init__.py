"""Verification lab for partition identities with difference conditions.

Four layers, each usable on its own:

* :mod:`pilab.qseries`: truncated power series, q-Pochhammer symbols, products.
* :mod:`pilab.partitions`: constraint families and brute-force count tables.
* :mod:`pilab.generators`: multisums, product sides and cross-check series.
* :mod:`pilab.bijection`: base partitions and the pair-move bijection.
"""

from .partitions import ConstraintFamily, Partition, count_table, enumerate_family, satisfies
from .qseries import BivariateSeries, TruncatedSeries

__version__ = "0.1.0"

__all__ = [
    "BivariateSeries",
    "ConstraintFamily",
    "Partition",
    "TruncatedSeries",
    "count_table",
    "enumerate_family",
    "satisfies",
]
