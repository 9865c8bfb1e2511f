use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("configuration file {path}: {message}")]
    ConfigFile { path: String, message: String },

    #[error("{product} at tau = {tau}: {source}")]
    Point {
        product: &'static str,
        tau: f64,
        #[source]
        source: kerrqc::Error,
    },

    #[error(transparent)]
    Model(#[from] kerrqc::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn at(product: &'static str, tau: f64) -> impl FnOnce(kerrqc::Error) -> Self {
        move |source| Self::Point {
            product,
            tau,
            source,
        }
    }

    pub fn io(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Self + '_ {
        move |source| Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
