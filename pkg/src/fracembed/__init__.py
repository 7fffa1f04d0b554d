"""Spectral graph embeddings in fractional Fourier domains.

Pipeline: graph -> Laplacian eigendecomposition -> fractional power of the
graph Fourier matrix -> filtered, powered spectra -> per-graph embedding rows
-> kNN cross-validation, with grid search over the fractional order and greedy
forward feature selection.
"""

__version__ = "0.1.0"

from .embedding import (EmbeddingFeature, EmbeddingMatrix, PowerSpectrum, assemble,
                        embed_dataset, embed_dataset_mixed, feature, pad_to,
                        power_spectrum, realify)
from .evaluation import EvalConfig, cross_validate, knn_predict
from .filters import (AntiHeatFilter, EigenvalueFilter, FilterBank, HeatFilter,
                      PartSineFilter, default_bank, evaluate_filter, heat_kernel_matrix)
from .graphs import (Graph, LabeledDataset, adjacency_matrix, degree_matrix, laplacian,
                     random_graph)
from .search import (AccuracyReport, AlphaGrid, forward_select, grid_search_alpha,
                     per_feature_alpha_search, search_all_features)
from .spectral import (FractionalOperator, FractionalSpectrum, SpectralDecomposition,
                       decompose, gfrft_alpha_derivative, gfrft_apply, gfrft_inverse,
                       gfrft_matrix)
