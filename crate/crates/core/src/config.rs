use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable holding capacity overrides, e.g. `schreier=24,zv=16`.
pub const CAPACITY_ENV: &str = "SCHREIER_CAPACITY";

/// Enumeration bounds shared by every oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capacity {
    /// Largest window / support handled by Schreier enumeration and norms.
    pub schreier_window: u32,
    /// Largest support handled by `Z^V` breakpoint enumeration.
    pub zv_window: u32,
    /// Largest arity for exact vertex enumeration and exact LPs.
    pub exact_arity: usize,
    /// Largest admissible set whose sign patterns are expanded into functionals.
    pub sign_set: usize,
    /// Largest window per side of a tensor.
    pub tensor_window: u32,
    /// Largest number of dual functionals materialised for one query.
    pub functionals: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity {
            schreier_window: 22,
            zv_window: 18,
            exact_arity: 6,
            sign_set: 8,
            tensor_window: 10,
            functionals: 200_000,
        }
    }
}

/// Overrides beyond these are refused outright.
const CEILING: Capacity = Capacity {
    schreier_window: 30,
    zv_window: 22,
    exact_arity: 8,
    sign_set: 12,
    tensor_window: 14,
    functionals: 2_000_000,
};

impl Capacity {
    /// Applies `key=value` overrides separated by commas.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("capacity override `{item}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("capacity value in `{item}` is not a number")))?;
            let (slot, ceiling) = match key.trim() {
                "schreier" => (&mut self.schreier_window as &mut dyn SetSlot, CEILING.schreier_window as usize),
                "zv" => (&mut self.zv_window as &mut dyn SetSlot, CEILING.zv_window as usize),
                "arity" => (&mut self.exact_arity as &mut dyn SetSlot, CEILING.exact_arity),
                "signs" => (&mut self.sign_set as &mut dyn SetSlot, CEILING.sign_set),
                "tensor" => (&mut self.tensor_window as &mut dyn SetSlot, CEILING.tensor_window as usize),
                "functionals" => (&mut self.functionals as &mut dyn SetSlot, CEILING.functionals),
                other => return Err(Error::invalid(format!("unknown capacity key `{other}`"))),
            };
            if value > ceiling {
                return Err(Error::capacity("capacity override", value, ceiling));
            }
            slot.set(value);
        }
        Ok(self)
    }

    /// Defaults with the overrides from [`CAPACITY_ENV`], if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPACITY_ENV) {
            Ok(spec) => Capacity::default().with_overrides(&spec),
            Err(_) => Ok(Capacity::default()),
        }
    }

    /// True when some bound exceeds its default; such runs may be slow.
    pub fn exceeds_defaults(&self) -> bool {
        let d = Capacity::default();
        self.schreier_window > d.schreier_window
            || self.zv_window > d.zv_window
            || self.exact_arity > d.exact_arity
            || self.sign_set > d.sign_set
            || self.tensor_window > d.tensor_window
            || self.functionals > d.functionals
    }
}

trait SetSlot {
    fn set(&mut self, value: usize);
}

impl SetSlot for u32 {
    fn set(&mut self, value: usize) {
        *self = value as u32;
    }
}

impl SetSlot for usize {
    fn set(&mut self, value: usize) {
        *self = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply_and_respect_the_ceiling() {
        let cap = Capacity::default().with_overrides("schreier=24, zv=16").unwrap();
        assert_eq!(cap.schreier_window, 24);
        assert_eq!(cap.zv_window, 16);
        assert!(cap.exceeds_defaults());
        assert!(matches!(
            Capacity::default().with_overrides("schreier=99"),
            Err(Error::Capacity { .. })
        ));
        assert!(Capacity::default().with_overrides("bogus=1").is_err());
        assert!(Capacity::default().with_overrides("zv").is_err());
    }
}
