use std::path::{Path, PathBuf};
use std::sync::Arc;

use sheafbn::cellsheaf::{constant_sheaf, CellularSheaf};
use sheafbn::fundgroup::{EdgeLabeling, GroupPresentation};
use sheafbn::localsys::{rep_to_sheaf, Representation};
use sheafbn::simplicial::SimplicialComplex;
use sheafbn::{fixtures, Error};

use crate::{exit, Common, SheafCmd};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Engine(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Engine(Error::InfiniteOrUnknownGroup | Error::SizeCapExceeded { .. }) => exit::BUDGET,
            CliError::Io { .. } | CliError::Engine(_) => exit::INPUT,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn complex(c: &Common) -> CliResult<Arc<SimplicialComplex>> {
    let x = match (&c.complex, &c.fixture) {
        (Some(path), _) => SimplicialComplex::parse_json(&read(path)?)?,
        (None, Some(name)) => fixtures::by_name(name)?,
        (None, None) => return Err(CliError::Usage("one of --complex or --fixture is required".into())),
    };
    Ok(Arc::new(x))
}

pub fn representation(path: &Path, p: &GroupPresentation) -> CliResult<Representation> {
    Ok(Representation::parse_json(p, &read(path)?)?)
}

pub fn sheaf(path: &Path, x: &Arc<SimplicialComplex>) -> CliResult<CellularSheaf> {
    Ok(CellularSheaf::parse_json(x.clone(), &read(path)?)?)
}

/// The sheaf selected by `--sheaf`, `--rep` or `--rank`.
pub fn selected_sheaf(cmd: &SheafCmd, x: &Arc<SimplicialComplex>, l: &EdgeLabeling) -> CliResult<CellularSheaf> {
    if let Some(path) = &cmd.sheaf {
        return sheaf(path, x);
    }
    if let Some(path) = &cmd.rep {
        let rho = representation(path, &l.presentation())?;
        return Ok(rep_to_sheaf(x, l, &rho)?);
    }
    Ok(constant_sheaf(x, cmd.common.ring, cmd.rank))
}

/// Splits `ID=PATH`; a bare path gets its file stem as id.
pub fn labeled(arg: &str) -> (String, PathBuf) {
    match arg.split_once('=') {
        Some((id, path)) if !id.is_empty() => (id.to_string(), PathBuf::from(path)),
        _ => {
            let path = PathBuf::from(arg);
            let id = path.file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
            (id, path)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(labeled("sign=reps/s.json"), ("sign".into(), PathBuf::from("reps/s.json")));
        assert_eq!(labeled("reps/perm.json"), ("perm".into(), PathBuf::from("reps/perm.json")));
    }
}
