"""InfoMat: matrices of conditional mutual information between two sequences.

Entry ``(i, j)`` of the InfoMat is ``I(X_i; Y_j | X^{i-1}, Y^{j-1})`` (nats);
sums over triangles, diagonals and sub-columns give directed information,
transfer entropy and instantaneous information.
"""
from .datasets import (SequencePair, WindowedDataset, center, read_csv, read_dataset,
                       window, write_dataset)
from .errors import (ConfigurationError, FormatError, InfoMatError, InsufficientSamplesError,
                     InvalidArgumentError, InvalidModelError, InvalidPolicyError,
                     NotPositiveDefiniteError, ResourceLimitError, TruncatedFileError)
from .gauss import (CovarianceEstimate, JointGaussianModel, gaussian_cmi, gaussian_entropy,
                    iid_correlated_model, log_det_psd, sample_covariance)
from .generators import (GaussianARModel, IsingPolicy, JointPMF, ar_joint_covariance,
                         ar_sample, cyclic_shift_model, gaussian_model_sample,
                         ising_joint_pmf, ising_sample, nonlinear_shift)
from .matrix import (InfoMat, estimate_gaussian, estimate_plugin_discrete,
                     infomat_from_covariance, infomat_from_gaussian_model, read_infomat_csv,
                     total_mi, write_infomat_csv)
from .measures import (RegionMask, delayed_di, directed_information, instantaneous,
                       region_mask, region_sum, superdiagonal_sum, te_sum, verify_identities)
from .oracle import pmf_cmi, pmf_entropy, pmf_infomat, pmf_total_mi
from .render import RenderSpec, render_csv, render_pgm, render_svg

__version__ = "0.1.0"
