//! Free algebras `F(n) = A(M~^n)`, memoized in memory and optionally on disk.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, LazyLock, Mutex, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{remove_bounds, FiniteAlgebra, MAX_TABLE_CELLS};
use crate::duality::pointwise_algebra;
use crate::error::{Error, Result};
use crate::profile::{profile, VarietyProfile};
use crate::satisfy::Model;
use crate::search::{count_morphisms, morphisms};
use crate::signature::{Op, Signature};
use crate::space::{space_power, SpaceMorphism, StructuredSpace};

/// Elements are the morphisms `M~^n → M~`, stored as value rows over the
/// points of `M~^n` and sorted lexicographically.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    signature: Signature,
    bar_of: Option<Signature>,
    n: usize,
    space: StructuredSpace,
    width: usize,
    values: Vec<u8>,
    index: HashMap<Box<[u8]>, u32>,
    generators: Vec<usize>,
    algebra: Option<FiniteAlgebra>,
}

impl FreeAlgebra {
    /// Signature of the profile carrying the duality.
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// For unbounded profiles, the profile that was asked for; the algebra
    /// itself is the bounded counterpart.
    pub fn bar_of(&self) -> Option<Signature> {
        self.bar_of
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.values.len() / self.width
    }

    pub fn space(&self) -> &StructuredSpace {
        &self.space
    }

    /// Indices of the coordinate projections.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    pub fn find(&self, row: &[u8]) -> Option<usize> {
        self.index.get(row).map(|&i| i as usize)
    }

    /// Operation tables, present when they fit the table budget.
    pub fn algebra(&self) -> Option<&FiniteAlgebra> {
        self.algebra.as_ref()
    }

    pub fn to_algebra(&self) -> Result<&FiniteAlgebra> {
        self.algebra.as_ref().ok_or_else(|| {
            let s = self.size() as u128;
            Error::budget("free algebra operation tables", s * s, MAX_TABLE_CELLS as u128)
        })
    }

    /// For unbounded profiles, the free algebra of that profile: this one
    /// with its bounds removed (needs `n ≥ 1`).
    pub fn unbounded_algebra(&self) -> Result<FiniteAlgebra> {
        let a = self.to_algebra()?;
        match self.bar_of {
            None => Ok(a.clone()),
            Some(sig) => {
                let r = remove_bounds(a)?;
                Ok(r.with_name(format!("F_{sig}({})", self.n)))
            }
        }
    }

    fn generator_algebra(&self) -> &'static FiniteAlgebra {
        &profile(self.signature).generator
    }

    fn lookup(&self, row: &[u8]) -> usize {
        self.find(row).expect("free algebra is closed under its operations")
    }
}

impl Model for FreeAlgebra {
    type Value = usize;

    fn signature(&self) -> Signature {
        self.signature
    }

    fn constant(&self, op: Op) -> usize {
        if let Some(a) = &self.algebra {
            return a.apply(op, &[]);
        }
        let c = self.generator_algebra().apply(op, &[]) as u8;
        self.lookup(&vec![c; self.width])
    }

    fn unary(&self, op: Op, a: &usize) -> usize {
        if let Some(alg) = &self.algebra {
            return alg.apply(op, &[*a]);
        }
        let m = self.generator_algebra();
        let row: Vec<u8> = self.row(*a).iter().map(|&v| m.apply(op, &[v as usize]) as u8).collect();
        self.lookup(&row)
    }

    fn binary(&self, op: Op, a: &usize, b: &usize) -> usize {
        if let Some(alg) = &self.algebra {
            return alg.apply(op, &[*a, *b]);
        }
        let m = self.generator_algebra();
        let row: Vec<u8> = self
            .row(*a)
            .iter()
            .zip(self.row(*b))
            .map(|(&x, &y)| m.apply(op, &[x as usize, y as usize]) as u8)
            .collect();
        self.lookup(&row)
    }
}

static MEMO: LazyLock<Mutex<HashMap<(Signature, usize), Arc<FreeAlgebra>>>> = LazyLock::new(Default::default);
static CACHE_DIR: RwLock<Option<PathBuf>> = RwLock::new(None);

/// Directory for on-disk free algebras; `None` disables the disk cache.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *CACHE_DIR.write().unwrap() = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    CACHE_DIR.read().unwrap().clone()
}

/// `F(n)` of the profile; unbounded profiles get their bounded counterpart,
/// marked by [`FreeAlgebra::bar_of`].
pub fn free_algebra(sig: Signature, n: usize) -> Result<Arc<FreeAlgebra>> {
    let p = profile(sig);
    let base = p.dual_profile().id;
    let key = (base, n);
    let cached = MEMO.lock().unwrap().get(&key).cloned();
    let f = match cached {
        Some(f) => f,
        None => {
            let dir = cache_dir();
            let f = dir
                .as_deref()
                .and_then(|d| load(d, base, n).ok().flatten())
                .map(Ok)
                .unwrap_or_else(|| build(p.dual_profile(), n))?;
            if let Some(d) = dir.as_deref() {
                // A cache that cannot be written only costs time on the next run.
                let _ = store(d, &f);
            }
            let f = Arc::new(f);
            MEMO.lock().unwrap().entry(key).or_insert_with(|| f.clone()).clone()
        }
    };
    if p.has_duality() {
        return Ok(f);
    }
    let mut marked = (*f).clone();
    marked.bar_of = Some(sig);
    Ok(Arc::new(marked))
}

/// Size of `F(n)`, or `None` once it exceeds `cap`. Does not build tables.
pub fn count_free(sig: Signature, n: usize, cap: u64) -> Result<Option<u64>> {
    let p = profile(sig).dual_profile();
    if let Some(f) = MEMO.lock().unwrap().get(&(p.id, n)) {
        let s = f.size() as u64;
        return Ok((s <= cap).then_some(s));
    }
    let space = space_power(&p.space, n)?;
    count_morphisms(&space, &p.space, cap)
}

fn build(p: &VarietyProfile, n: usize) -> Result<FreeAlgebra> {
    let space = space_power(&p.space, n)?;
    let elements = morphisms(&space, &p.space)?;
    let width = space.size();
    let mut values = Vec::with_capacity(elements.len() * width);
    for e in &elements {
        values.extend(e.map.iter().map(|&v| v as u8));
    }
    assemble(p, n, space, values, Some(&elements))
}

fn assemble(
    p: &VarietyProfile,
    n: usize,
    space: StructuredSpace,
    values: Vec<u8>,
    elements: Option<&[SpaceMorphism]>,
) -> Result<FreeAlgebra> {
    let width = space.size();
    let size = values.len() / width;
    let mut index = HashMap::with_capacity(size);
    for i in 0..size {
        index.insert(values[i * width..(i + 1) * width].into(), i as u32);
    }
    let m = p.generator.size();
    let generators = (0..n)
        .map(|k| {
            let stride = m.pow(k as u32);
            let row: Vec<u8> = (0..width).map(|pt| ((pt / stride) % m) as u8).collect();
            index
                .get(row.as_slice())
                .map(|&i| i as usize)
                .ok_or_else(|| Error::Invariant(format!("projection {k} is not an element of F({n})")))
        })
        .collect::<Result<Vec<_>>>()?;
    let algebra = if (size as u128) * (size as u128) <= MAX_TABLE_CELLS as u128 {
        let owned;
        let elements = match elements {
            Some(e) => e,
            None => {
                owned = (0..size)
                    .map(|i| SpaceMorphism::new(values[i * width..(i + 1) * width].iter().map(|&v| v as usize).collect()))
                    .collect::<Vec<_>>();
                &owned
            }
        };
        let mut a = pointwise_algebra(p, elements, width)?.with_name(format!("F_{}({n})", p.id));
        a = a.with_labels(generator_labels(size, &generators))?;
        Some(a)
    } else {
        None
    };
    Ok(FreeAlgebra {
        signature: p.id,
        bar_of: None,
        n,
        space,
        width,
        values,
        index,
        generators,
        algebra,
    })
}

/// Generators are named `x, y, z, ...`; other elements `t<index>`.
fn generator_labels(size: usize, generators: &[usize]) -> Vec<String> {
    let names = ["x", "y", "z", "u", "v", "w"];
    let mut labels: Vec<String> = (0..size).map(|i| format!("t{i}")).collect();
    for (k, &g) in generators.iter().enumerate() {
        labels[g] = names.get(k).map(|s| s.to_string()).unwrap_or_else(|| format!("x{k}"));
    }
    labels
}

const CACHE_FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: u32,
    profile: Signature,
    n: usize,
    width: usize,
    size: usize,
    generators: Vec<usize>,
    values: String,
    sha256: String,
}

fn cache_path(dir: &Path, sig: Signature, n: usize) -> PathBuf {
    dir.join(format!("free-{sig}-{n}.json"))
}

fn digest(sig: Signature, n: usize, values: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("{CACHE_FORMAT}:{sig}:{n}:").as_bytes());
    h.update(values);
    hex(&h.finalize())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn unhex(s: &str) -> Option<Vec<u8>> {
    if s.len() % 2 != 0 {
        return None;
    }
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok()).collect()
}

/// `Ok(None)` when the file is absent, stale or corrupt.
fn load(dir: &Path, sig: Signature, n: usize) -> Result<Option<FreeAlgebra>> {
    let path = cache_path(dir, sig, n);
    let Ok(text) = fs::read_to_string(&path) else {
        return Ok(None);
    };
    let Ok(file) = serde_json::from_str::<CacheFile>(&text) else {
        return Ok(None);
    };
    let p = profile(sig);
    let space = space_power(&p.space, n)?;
    if file.format != CACHE_FORMAT || file.profile != sig || file.n != n || file.width != space.size() {
        return Ok(None);
    }
    let Some(values) = unhex(&file.values) else {
        return Ok(None);
    };
    if values.len() != file.size * file.width || digest(sig, n, &values) != file.sha256 {
        return Ok(None);
    }
    let f = assemble(p, n, space, values, None)?;
    if f.generators != file.generators {
        return Ok(None);
    }
    Ok(Some(f))
}

fn store(dir: &Path, f: &FreeAlgebra) -> Result<()> {
    fs::create_dir_all(dir)?;
    let file = CacheFile {
        format: CACHE_FORMAT,
        profile: f.signature,
        n: f.n,
        width: f.width,
        size: f.size(),
        generators: f.generators.clone(),
        values: hex(&f.values),
        sha256: digest(f.signature, f.n, &f.values),
    };
    let path = cache_path(dir, f.signature, f.n);
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(&file).map_err(|e| Error::Format(e.to_string()))?)?;
    fs::rename(&tmp, &path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_and_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let f = build(profile(Signature::Bdl), 2).unwrap();
        store(dir.path(), &f).unwrap();
        let g = load(dir.path(), Signature::Bdl, 2).unwrap().unwrap();
        assert_eq!(f.values, g.values);
        assert_eq!(f.generators, g.generators);

        let path = cache_path(dir.path(), Signature::Bdl, 2);
        let text = fs::read_to_string(&path).unwrap();
        let mut file: CacheFile = serde_json::from_str(&text).unwrap();
        file.values = file.values.replacen('0', "1", 1);
        fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        assert!(load(dir.path(), Signature::Bdl, 2).unwrap().is_none());
    }
}
