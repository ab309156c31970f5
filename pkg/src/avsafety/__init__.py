"""Aviation safety occurrence classification toolkit.

Encodes occurrences as 61 binary features in 17 data classes, trains five
classifier families from scratch (random forest, gradient boosting, logistic
regression, linear SVM, k-nearest neighbors), benchmarks them with and
without SMOTE rebalancing, and serves incident / serious-incident
predictions over HTTP and a CLI.
"""

__version__ = "0.1.0"
