"""Network inference for linear dynamical systems driven by colored noise.

The heavy lifting lives in the compiled extension; this package re-exports
its surface: graph generators, noise models, the simulator, lag-moment
estimators, feasibility analysis, feature builders, the GMM / feedforward
classifiers and the sweep engine.
"""

from lagnet._core import (  # noqa: F401
    AccuracyAggregate,
    AccuracyReport,
    AccuracyRow,
    CorpusConfig,
    EstimatorKind,
    FeasibilityReport,
    FeatureKind,
    FeatureSet,
    FrozenParams,
    Gmm1d,
    Graph,
    InteractionMatrix,
    LagMoments,
    MatrixEstimate,
    MlpModel,
    NoiseModel,
    PredictionSet,
    Scaler,
    SimConfig,
    SweepAxis,
    SweepConfig,
    TimeSeries,
    TrainConfig,
    __version__,
    accuracy,
    analytic_lag_moment,
    analytic_lag_moments,
    apply_scaler,
    build_f,
    build_k,
    build_t,
    build_training_corpus,
    decompose_covariance,
    empirical_lag_moments,
    erdos_renyi,
    error_matrix,
    estimate,
    evaluate_cell,
    extract_labels,
    feasibility_margin,
    ffnn_predict,
    fit_gmm,
    fit_scaler,
    gmm_classify,
    laplacian_weights,
    largest_gap_threshold,
    load_edge_list,
    load_mlp,
    min_exogenous_variance,
    off_diagonal_values,
    offset_noise,
    ordered_pairs,
    osc,
    pair_decision_matrix,
    parse_edge_list,
    restrict_series,
    run_sweep,
    sample_noise,
    save_mlp,
    simulate,
    stationary_covariance,
    support_matrix,
    threshold_support,
    train_ffnn,
    watts_strogatz,
    jittered_noise,
)
