"""voicegate: voice-liveness checks from short-time time-domain features.

A spoken recording is framed, Hamming-windowed, and reduced to three sums
(short-term energy, average amplitude, zero crossings). A calibrated weighted
threshold over the normalized triple decides human vs bot. The package ships
the feature pipeline, a calibration grid search, a deterministic fixture
generator, a CLI, and a challenge/verify HTTP service.
"""

__version__ = "0.1.0"

from .calibration import (
    CalibrationReport,
    CrossValidationResult,
    GridSpec,
    Indicator,
    Label,
    LabeledSample,
    ManifestError,
    MissingClassError,
    NoAcceptableComboError,
    ParamResult,
    RatePair,
    build_corpus,
    cross_validate,
    evaluate,
    format_report,
    grid_search,
    load_manifest,
    sweep_single_indicator,
    weight_triples,
)
from .challenge import (
    Challenge,
    ChallengeAlreadyUsedError,
    ChallengeExpiredError,
    ChallengeRegistry,
    ChallengeState,
    Corpus,
    EmptyCorpusError,
    NoEligibleSentencesError,
    UnknownChallengeError,
    load_corpus,
    sample_sentence,
    split_sentences,
)
from .classifier import (
    DEFAULT_PARAMS,
    ClassifierParams,
    Decision,
    EmptyDatasetError,
    Model,
    ModelFormatError,
    NormalizationStats,
    NormalizedFeatures,
    Verdict,
    classify,
    decide,
    dump_model,
    fit_normalizer,
    load_default_model,
    load_model,
    normalize,
    score,
)
from .features import (
    FrameFeatures,
    FrameTooShortError,
    RawFeatures,
    extract_file_features,
    frame_feature_track,
    short_term_amplitude,
    short_term_energy,
    short_term_zcr,
)
from .fixtures import fixture_buffers, generate_corpus
from .framing import (
    DEFAULT_FRAMING,
    Frame,
    FramingConfig,
    LengthMismatchError,
    SPLIT_WINDOW_FRAMING,
    WindowedFrame,
    WindowLengthError,
    apply_window,
    frame_signal,
    hamming_coefficients,
)
from .pipeline import Analysis, analyze_buffer, analyze_wav_bytes
from .wavio import (
    ACCEPTED_RATES,
    AudioBuffer,
    EmptyAudioError,
    MalformedContainerError,
    UnsupportedFormatError,
    UnsupportedRateError,
    WavError,
    parse_wav,
    write_wav,
)

__all__ = [name for name in dir() if not name.startswith("_")]
