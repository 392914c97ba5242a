use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit reports.
///
/// [`Error::is_validation`] separates malformed input (bad schemas, broken
/// group axioms, out-of-range options) from mathematical refusals such as a
/// non-normal subgroup or a non-real embedding problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid {context}: {message}")]
    Invalid { context: String, message: String },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("resource cap exceeded: {what} needs {requested}, cap is {cap}")]
    CapExceeded { what: String, requested: u128, cap: u128 },

    #[error("subgroup is not normal: conjugating {element} by {conjugator} leaves it")]
    NotNormal { element: usize, conjugator: usize },

    #[error("homomorphism is not surjective: {missing} is not in the image")]
    NotSurjective { missing: usize },

    #[error("group of order {order} is not a 2-group")]
    NotTwoGroup { order: usize },

    #[error("element {element} does not have order dividing 2")]
    NotInvolution { element: usize },

    #[error("generator `{generator}` is sent to the identity, so its involution class is undefined")]
    TrivialInvolutionImage { generator: String },

    #[error("bundle action is not free: {element} fixes point {point}")]
    NotFree { element: usize, point: usize },

    #[error("bundle invariant violated: {0}")]
    BundleInvariant(String),

    #[error("cover is not valid: {0}")]
    BadCover(String),

    #[error("embedding problem is not real: involution class of {class_rep} has no involution above its image")]
    NotReal { class_rep: usize },

    #[error("embedding problem is not central: kernel element {element} is not central")]
    NotCentral { element: usize },

    #[error("kernel has order {order}, expected 2")]
    KernelOrder { order: usize },

    #[error("lifting data is inconsistent at class of {class_rep}: {message}")]
    InconsistentLifting { class_rep: usize, message: String },

    #[error("algebra is not a connected sum: {0}")]
    Decomposition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn invalid(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            context: context.into(),
            message: message.into(),
        }
    }

    pub fn cap(what: impl Into<String>, requested: u128, cap: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            requested,
            cap,
        }
    }

    /// Input that could not be accepted at all, as opposed to a domain refusal.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. } | Error::Invalid { .. } | Error::UnknownLabel(_)
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Invalid { .. } => "invalid",
            Error::UnknownLabel(_) => "unknown_label",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::NotNormal { .. } => "not_normal",
            Error::NotSurjective { .. } => "not_surjective",
            Error::NotTwoGroup { .. } => "not_two_group",
            Error::NotInvolution { .. } => "not_involution",
            Error::TrivialInvolutionImage { .. } => "trivial_involution_image",
            Error::NotFree { .. } => "not_free",
            Error::BundleInvariant(_) => "bundle_invariant",
            Error::BadCover(_) => "bad_cover",
            Error::NotReal { .. } => "not_real",
            Error::NotCentral { .. } => "not_central",
            Error::KernelOrder { .. } => "kernel_order",
            Error::InconsistentLifting { .. } => "inconsistent_lifting",
            Error::Decomposition(_) => "decomposition",
            Error::Unsupported(_) => "unsupported",
        }
    }
}
