"""anonkit: anonymize tabular personal data and measure the information lost."""

__version__ = "0.1.0"

from .dataset import (  # noqa: E402
    AttributeClass,
    Column,
    Dataset,
    Kind,
    column_view,
    frequency_distribution,
)
from .io import (  # noqa: E402
    load_config,
    parse_config,
    read_csv,
    read_csv_text,
    read_hierarchy,
    write_csv,
)
from .kanon import (  # noqa: E402
    EquivalenceClass,
    KAnonConfig,
    KAnonResult,
    equivalence_classes,
    k_anonymize,
    prosecutor_risk,
    verify_k,
)
from .metrics import (  # noqa: E402
    ColumnMetrics,
    ColumnStatus,
    EvaluationReport,
    evaluate,
    information_loss,
    measure,
    shannon_entropy,
)
from .report import RenderFormat, render_report  # noqa: E402
from .synth import (  # noqa: E402
    GeneratorSpec,
    Profile,
    Variant,
    cpf_check_digits,
    generate,
    validate_cpf,
)
from .techniques import (  # noqa: E402
    CategoryGroups,
    ColumnSpec,
    Hierarchy,
    MaskStrategy,
    NumericBins,
    PerturbationParams,
    PipelineConfig,
    Technique,
    aggregate_categorical,
    aggregate_numeric,
    apply_pipeline,
    generalize,
    mask_identifier,
    perturb_numeric,
    suppress_column,
)
