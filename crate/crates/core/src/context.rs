//! Per-field state shared by the higher-level operations: memoized
//! families, base u-expansions, Goss tables and Taylor tables.

use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use crate::algebra::Fq;
use crate::error::{Error, Result};
use crate::forms::{Families, QMForm, SeqName};
use crate::hyperderive::tables::{build_tables, load_tables, save_tables, TaylorTables};
use crate::useries::{base_expansions, BaseExpansions, GossTable};

pub struct Context {
    f: Fq,
    families: Families,
    base: RwLock<Option<Arc<BaseExpansions>>>,
    goss: RwLock<Option<Arc<GossTable>>>,
    taylor: Mutex<Option<Arc<TaylorTables>>>,
    cache_dir: Option<PathBuf>,
    progress: bool,
    taylor_budget: usize,
}

impl Context {
    /// Default bound on the `X`-precision of Taylor tables.
    pub const DEFAULT_TAYLOR_BUDGET: usize = 1 << 12;

    pub fn new(f: Fq) -> Self {
        Context {
            f,
            families: Families::new(f),
            base: RwLock::new(None),
            goss: RwLock::new(None),
            taylor: Mutex::new(None),
            cache_dir: None,
            progress: false,
            taylor_budget: Self::DEFAULT_TAYLOR_BUDGET,
        }
    }

    /// Persist Taylor tables under `dir`.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    /// Print stage progress to stderr.
    pub fn with_progress(mut self, on: bool) -> Self {
        self.progress = on;
        self
    }

    pub fn with_taylor_budget(mut self, xprec: usize) -> Self {
        self.taylor_budget = xprec;
        self
    }

    pub fn field(&self) -> Fq {
        self.f
    }
    pub fn q(&self) -> u32 {
        self.f.q()
    }
    pub fn families(&self) -> &Families {
        &self.families
    }

    pub fn family(&self, name: SeqName, k: u32) -> Result<QMForm> {
        Ok((*self.families.get(name, k)?).clone())
    }

    /// Base expansions known at least to `u^prec`.
    pub fn base(&self, prec: usize) -> Result<Arc<BaseExpansions>> {
        if let Some(b) = self.base.read().expect("lock").as_ref() {
            if b.prec >= prec {
                return Ok(b.clone());
            }
        }
        let mut slot = self.base.write().expect("lock");
        if let Some(b) = slot.as_ref() {
            if b.prec >= prec {
                return Ok(b.clone());
            }
        }
        let target = slot.as_ref().map_or(prec, |b| prec.max(b.prec + b.prec / 2));
        if self.progress {
            eprintln!("[base] u-expansions to precision {target}");
        }
        let b = Arc::new(base_expansions(self.f, target)?);
        *slot = Some(b.clone());
        Ok(b)
    }

    /// Goss polynomials `G_1..G_nmax` (or more).
    pub fn goss(&self, nmax: usize) -> Arc<GossTable> {
        if let Some(g) = self.goss.read().expect("lock").as_ref() {
            if g.nmax() >= nmax {
                return g.clone();
            }
        }
        let mut slot = self.goss.write().expect("lock");
        if let Some(g) = slot.as_ref() {
            if g.nmax() >= nmax {
                return g.clone();
            }
        }
        let g = Arc::new(GossTable::new(self.f, nmax));
        *slot = Some(g.clone());
        g
    }

    /// Taylor tables of the generators known modulo `X^xprec` (or beyond).
    pub fn taylor(&self, xprec: usize) -> Result<Arc<TaylorTables>> {
        let mut slot = self.taylor.lock().expect("lock");
        if let Some(t) = slot.as_ref() {
            if t.xprec() >= xprec {
                return Ok(t.clone());
            }
        }
        if xprec > self.taylor_budget {
            let r = crate::hyperderive::stages::stages_needed(self.q(), xprec);
            return Err(Error::Precision(format!(
                "D_n for n < {xprec} needs Taylor stage {r} (X-precision {xprec}), above the budget {}",
                self.taylor_budget
            )));
        }
        if let Some(dir) = &self.cache_dir {
            if let Some(t) = load_tables(dir, self.f, xprec) {
                let t = Arc::new(t);
                *slot = Some(t.clone());
                return Ok(t);
            }
        }
        let progress = self.progress;
        let t = build_tables(&self.families, xprec, |st| {
            if progress {
                eprintln!("[taylor] stage {} done (X-cap {}, ladder size {})", st.r(), st.cap(), st.s_max());
            }
        })?;
        if let Some(dir) = &self.cache_dir {
            save_tables(dir, &t)?;
        }
        let t = Arc::new(t);
        *slot = Some(t.clone());
        Ok(t)
    }
}
