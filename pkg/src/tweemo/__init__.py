"""Tweet emotion classification toolkit.

Corpus preparation, classical preprocessing, TF-IDF vectorization, an
SMO-trained RBF-kernel SVM with Platt calibration, Naive Bayes baselines,
log-probability ensemble fusion, and an evaluation harness.
"""

__version__ = "0.1.0"
