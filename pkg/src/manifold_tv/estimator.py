"""scikit-learn style front end to the solvers."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .image import ManifoldImage
from .metrics import delta_snr
from .prox import DEFAULT_OMEGA, DEFAULT_TAU
from .solvers import DenoiseParams, LambdaSchedule, denoise
from .validation import check_manifold, check_manifold_image


class TVDenoiser(TransformerMixin, BaseEstimator):
    """Variational denoiser for manifold-valued images.

    Minimises a data term plus ``alpha`` times an anisotropic first-order
    coupling with a proximal point scheme.

    Parameters
    ----------
    manifold : Manifold or str
        Target manifold or its tag (``"s2"``, ``"pos3"``, ``"euclidean:3"``...).
    data_term : {"l2", "l1", "huber"}
    regularizer : {"tv", "tv2", "huber"}
    alpha : float
        Regularisation weight.
    iterations : int
    algorithm : {"cyclic", "parallel", "parallel-fast"}
    lambda_c, lambda_omega : float
        Step sizes ``lambda_c * r ** -lambda_omega``.
    tau, huber_omega : float
        Huber parameters.
    n_jobs : int, optional
        Worker threads for the parallel algorithms. Does not change results.

    Attributes
    ----------
    manifold_ : Manifold
    params_ : DenoiseParams
    functional_trace_ : list of (int, float)
    n_iter_ : int
    report_ : SolveReport
        Report of the last :meth:`transform` call.

    Examples
    --------
    >>> import numpy as np
    >>> den = TVDenoiser("euclidean:1", alpha=0.25, iterations=50)
    >>> den.fit_transform(np.array([[0.0], [0.0], [1.0], [1.0]])).shape
    (4, 1)
    """

    def __init__(self, manifold="euclidean:1", data_term="l2", regularizer="tv", alpha=0.1,
                 iterations=100, algorithm="cyclic", lambda_c=3.0, lambda_omega=0.95,
                 tau=DEFAULT_TAU, huber_omega=DEFAULT_OMEGA, n_jobs=None):
        self.manifold = manifold
        self.data_term = data_term
        self.regularizer = regularizer
        self.alpha = alpha
        self.iterations = iterations
        self.algorithm = algorithm
        self.lambda_c = lambda_c
        self.lambda_omega = lambda_omega
        self.tau = tau
        self.huber_omega = huber_omega
        self.n_jobs = n_jobs

    def _make_params(self):
        return DenoiseParams(
            data_term=self.data_term,
            regularizer=self.regularizer,
            alpha=float(self.alpha),
            schedule=LambdaSchedule(float(self.lambda_c), float(self.lambda_omega)),
            iterations=int(self.iterations),
            algorithm=self.algorithm,
            tau=float(self.tau),
            huber_omega=float(self.huber_omega),
        )

    def fit(self, X=None, y=None):
        """Validate the hyper-parameters. The model has no learned state."""
        self.manifold_ = check_manifold(self.manifold)
        self.params_ = self._make_params()
        if X is not None:
            check_manifold_image(X, self.manifold_)
        return self

    def transform(self, X, x0=None):
        """Denoise ``X``; returns an array (or a ManifoldImage if given one)."""
        check_is_fitted(self, "params_")
        M, data = check_manifold_image(X, self.manifold_)
        init = None if x0 is None else check_manifold_image(x0, M)[1]
        rep = denoise(M, data, self.params_, x0=init, n_jobs=self.n_jobs)
        self.report_ = rep
        self.functional_trace_ = rep.functional_trace
        self.n_iter_ = rep.iterations_run
        if isinstance(X, ManifoldImage):
            return X.with_data(rep.output)
        return rep.output

    def score(self, X, y):
        """Delta-SNR (dB) of the restoration of noisy ``X`` against clean ``y``."""
        out = self.transform(X)
        M = self.manifold_
        g = y.data if isinstance(y, ManifoldImage) else np.asarray(y, dtype=float)
        f = X.data if isinstance(X, ManifoldImage) else np.asarray(X, dtype=float)
        x = out.data if isinstance(out, ManifoldImage) else out
        return delta_snr(g, f, x, M)
