"""Prior hyperparameters and initial values of the sampler."""

# Intercepts, free and sign-restricted loadings: N(0, 10)
INTERCEPT_VARIANCE = 10.0
LOADING_VARIANCE = 10.0
# Lag coefficients when shrinkage is switched off
FLAT_PHI_VARIANCE = 10.0

# Inverse-gamma (shape, scale) priors
VARIANCE_PRIOR = (3.0, 0.5)      # W and constant Sigma
OMEGA2_PRIOR = (3.0, 0.03)       # log-volatility innovation variances

# Random-walk paths start from N(0, 10)
PATH_INITIAL_VARIANCE = 10.0
# Floor on the loading-path innovation variance used to build the path precision
MIN_PATH_INNOVATION = 1e-8

# Initialization
RIDGE_PENALTY = 1.0
INITIAL_DOF = 30.0
INITIAL_OMEGA2 = 0.05
INITIAL_Q_LOCAL = 1.0
INITIAL_Q_GLOBAL = 0.01
MIN_INITIAL_VARIANCE = 1e-3
# Smallest magnitude a sign-restricted loading is projected to at initialization
MIN_SIGNED_LOADING = 1e-2
