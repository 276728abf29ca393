use num_complex::Complex64;

use super::{BogoliubovMode, ModeError};

/// Whether a basis entry is the teleported signal or an environment vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Signal,
    Vacuum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisEntry {
    pub label: String,
    pub kind: BasisKind,
}

/// Ordered registry of the independent input modes every operator is expanded over.
///
/// All entries are in the vacuum state; a coherent signal is carried as a
/// c-number displacement on the mode built from it. Entries are only ever
/// appended, so an index stays valid for the lifetime of the basis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VacuumBasis {
    entries: Vec<BasisEntry>,
}

impl VacuumBasis {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Basis with the signal at index 0 followed by the vacua in order.
    pub fn new<S: AsRef<str>>(signal: &str, vacua: &[S]) -> Result<Self, ModeError> {
        let mut basis = Self::empty();
        basis.push(signal, BasisKind::Signal)?;
        for v in vacua {
            basis.push(v.as_ref(), BasisKind::Vacuum)?;
        }
        Ok(basis)
    }

    pub fn push(&mut self, label: &str, kind: BasisKind) -> Result<usize, ModeError> {
        if self.index_of(label).is_some() {
            return Err(ModeError::DuplicateLabel(label.to_string()));
        }
        if kind == BasisKind::Signal && self.signal_index().is_some() {
            return Err(ModeError::SecondSignal(label.to_string()));
        }
        self.entries.push(BasisEntry {
            label: label.to_string(),
            kind,
        });
        Ok(self.entries.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn label(&self, index: usize) -> &str {
        &self.entries[index].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    pub fn signal_index(&self) -> Option<usize> {
        self.entries.iter().position(|e| e.kind == BasisKind::Signal)
    }

    /// The operator of basis entry `index` with the given c-number displacement.
    pub fn mode(&self, index: usize, displacement: Complex64) -> BogoliubovMode {
        BogoliubovMode::basis_vector(self.len(), index, displacement)
    }

    /// All basis operators; the signal entry receives `signal_displacement`.
    pub fn initial_modes(&self, signal_displacement: Complex64) -> Vec<BogoliubovMode> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| match e.kind {
                BasisKind::Signal => self.mode(i, signal_displacement),
                BasisKind::Vacuum => self.mode(i, Complex64::new(0.0, 0.0)),
            })
            .collect()
    }
}
