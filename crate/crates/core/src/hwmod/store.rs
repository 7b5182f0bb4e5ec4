use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use super::{Depth, HWModule, WeightSpace};
use crate::cache::{key_of, DiskCache};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::rootdata::{CartanData, RootVec, Weight};

const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct SpaceData {
    depth: RootVec,
    weight: Weight,
    tags: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct ActionData {
    src: RootVec,
    index: usize,
    matrix: Matrix,
}

/// Serialized form of a module; matrices carry RatQ values as strings.
#[derive(Serialize, Deserialize)]
struct ModuleData {
    version: u32,
    cartan: CartanData,
    highest: Weight,
    depth: Option<i64>,
    spaces: Vec<SpaceData>,
    e: Vec<ActionData>,
    f: Vec<ActionData>,
}

impl HWModule {
    pub fn to_json(&self) -> Result<String> {
        let data = ModuleData {
            version: FORMAT_VERSION,
            cartan: self.cartan.clone(),
            highest: self.highest.clone(),
            depth: match self.depth {
                Depth::Full => None,
                Depth::Height(h) => Some(h),
            },
            spaces: self
                .spaces
                .values()
                .map(|s| SpaceData { depth: s.depth.clone(), weight: s.weight.clone(), tags: s.tags.clone() })
                .collect(),
            e: self
                .e_up
                .iter()
                .map(|((d, i), m)| ActionData { src: d.clone(), index: *i, matrix: m.clone() })
                .collect(),
            f: self
                .f_down
                .iter()
                .map(|((d, i), m)| ActionData { src: d.clone(), index: *i, matrix: m.clone() })
                .collect(),
        };
        Ok(serde_json::to_string(&data)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let data: ModuleData = serde_json::from_str(s)?;
        if data.version != FORMAT_VERSION {
            return Err(crate::error::Error::Parse(format!("module format version {}", data.version)));
        }
        let spaces: BTreeMap<RootVec, WeightSpace> = data
            .spaces
            .into_iter()
            .map(|s| (s.depth.clone(), WeightSpace { depth: s.depth, weight: s.weight, tags: s.tags }))
            .collect();
        Ok(HWModule {
            cartan: data.cartan,
            highest: data.highest,
            depth: data.depth.map_or(Depth::Full, Depth::Height),
            spaces,
            e_up: data.e.into_iter().map(|a| ((a.src, a.index), a.matrix)).collect(),
            f_down: data.f.into_iter().map(|a| ((a.src, a.index), a.matrix)).collect(),
        })
    }
}

/// Shared, insert-once store of constructed modules, optionally backed by disk.
pub struct ModuleStore {
    cd: CartanData,
    disk: DiskCache,
    mods: RwLock<HashMap<(Weight, Depth), Arc<HWModule>>>,
}

impl ModuleStore {
    pub fn new(cd: CartanData, disk: DiskCache) -> Self {
        ModuleStore { cd, disk, mods: RwLock::new(HashMap::new()) }
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cd
    }

    pub fn get(&self, lambda: &Weight, depth: Depth) -> Result<Arc<HWModule>> {
        let key = (lambda.clone(), depth);
        if let Some(m) = self.mods.read().get(&key) {
            return Ok(m.clone());
        }
        let ns = format!("hwmod-{}", self.cd.content_hash());
        let dkey = format!(
            "{}-{}",
            key_of(&lambda.0),
            match depth {
                Depth::Full => "full".to_string(),
                Depth::Height(h) => h.to_string(),
            }
        );
        let cached: Option<String> = self.disk.load(&ns, &dkey);
        let m = match cached.and_then(|s| HWModule::from_json(&s).ok()) {
            Some(m) => m,
            None => {
                let m = HWModule::build(&self.cd, lambda, depth)?;
                let _ = self.disk.store(&ns, &dkey, &m.to_json()?);
                m
            }
        };
        Ok(self.mods.write().entry(key).or_insert_with(|| Arc::new(m)).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_exact() {
        let cd = CartanData::preset("B2").unwrap();
        let m = HWModule::build(&cd, &Weight(vec![1, 1]), Depth::Full).unwrap();
        let s = m.to_json().unwrap();
        let back = HWModule::from_json(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json().unwrap(), s);
    }
}
