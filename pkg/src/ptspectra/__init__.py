"""PT-symmetric transfer matrices and Hamiltonians: builders,
spectral classification, partition functions, correlators, phase
scans, Lee-Yang zeros, and a brute-force enumeration oracle."""

from .errors import (
    BasisConstructionError,
    BrokenSymmetryError,
    CoefficientOverflowError,
    ConfigError,
    ConvergenceError,
    DegenerateSpectrumError,
    InputError,
    InvariantError,
    PairingError,
    PartitionZeroError,
    PtSpectraError,
    SizeCapError,
    TruncationError,
)
from .linalg import EigenSystem, char_poly, eig
from .ptsym import (
    PairedSpectrum,
    PtWitness,
    RegionLabel,
    bender_mannheim_test,
    check_pt,
    hermitize,
    pair_and_classify,
    real_basis,
)
from .spin_models import (
    AnnniSpec,
    ChiralPottsSpec,
    ModelBundle,
    ZnModelSpec,
    annni_disorder_line,
    build_annni,
    build_chiral_potts,
    build_family,
    build_zn_transfer,
    fourier_conjugate,
    zn_fourier,
    zn_transfer_mp,
)
from .gauge_models import (
    GaugeSpec,
    IrrepBasis,
    TrajectoryTable,
    build_gauge_hamiltonian,
    character_matrices,
    eigen_trajectory,
    irrep_basis,
    su3_block,
    truncation_report,
)
from .observables import (
    CorrelatorSeries,
    FitResult,
    FreeEnergySet,
    LeeYangResult,
    PartitionValue,
    ScanGrid,
    fit_decay,
    lee_yang_zeros,
    one_point,
    partition_function,
    phase_scan,
    two_point,
)
from .oracle import (
    EnumerationResult,
    enumerate_annni_bonds,
    enumerate_annni_chain,
    enumerate_zn_chain,
    su3_tensor_check,
)

__version__ = "0.1.0"

__all__ = [
    "PtSpectraError",
    "InputError",
    "ConfigError",
    "ConvergenceError",
    "PairingError",
    "BrokenSymmetryError",
    "DegenerateSpectrumError",
    "PartitionZeroError",
    "SizeCapError",
    "TruncationError",
    "CoefficientOverflowError",
    "BasisConstructionError",
    "InvariantError",
    "EigenSystem",
    "eig",
    "char_poly",
    "PtWitness",
    "PairedSpectrum",
    "RegionLabel",
    "check_pt",
    "bender_mannheim_test",
    "pair_and_classify",
    "real_basis",
    "hermitize",
    "ZnModelSpec",
    "ChiralPottsSpec",
    "AnnniSpec",
    "ModelBundle",
    "build_zn_transfer",
    "zn_fourier",
    "fourier_conjugate",
    "build_chiral_potts",
    "build_annni",
    "annni_disorder_line",
    "zn_transfer_mp",
    "build_family",
    "IrrepBasis",
    "GaugeSpec",
    "TrajectoryTable",
    "irrep_basis",
    "character_matrices",
    "truncation_report",
    "build_gauge_hamiltonian",
    "su3_block",
    "eigen_trajectory",
    "PartitionValue",
    "CorrelatorSeries",
    "FitResult",
    "ScanGrid",
    "FreeEnergySet",
    "LeeYangResult",
    "partition_function",
    "one_point",
    "two_point",
    "fit_decay",
    "phase_scan",
    "lee_yang_zeros",
    "EnumerationResult",
    "enumerate_zn_chain",
    "enumerate_annni_chain",
    "enumerate_annni_bonds",
    "su3_tensor_check",
    "__version__",
]
