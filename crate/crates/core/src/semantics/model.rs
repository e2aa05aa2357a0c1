use serde_json::json;

use super::value::{conforms, SemValue};
use super::{Scope, SemanticsError};
use crate::surface::{parse_type, FrameFlags, LogicType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    pub name: String,
    pub ty: LogicType,
    pub value: SemValue,
}

/// An explicit finite Kripke model: worlds `0..n`, entities `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub scope: Scope,
    /// `access[w][v]`: world `v` is accessible from `w`.
    pub access: Vec<Vec<bool>>,
    /// `exists_at[e][w]`: entity `e` exists at world `w`.
    pub exists_at: Vec<Vec<bool>>,
    /// Constant interpretations, in signature order.
    pub constants: Vec<Interpretation>,
}

impl KripkeModel {
    /// A model with the universal accessibility relation in which every
    /// entity exists everywhere and no constant is interpreted yet.
    pub fn universal(scope: Scope) -> KripkeModel {
        KripkeModel {
            scope,
            access: vec![vec![true; scope.worlds]; scope.worlds],
            exists_at: vec![vec![true; scope.worlds]; scope.entities],
            constants: Vec::new(),
        }
    }

    pub fn with_access(mut self, pairs: &[(usize, usize)]) -> KripkeModel {
        for row in &mut self.access {
            row.fill(false);
        }
        for &(w, v) in pairs {
            self.access[w][v] = true;
        }
        self
    }

    /// Sets (or replaces) the interpretation of a constant, checking that
    /// the value is a denotation of `ty`.
    pub fn interpret(&mut self, name: &str, ty: LogicType, value: SemValue) -> Result<(), SemanticsError> {
        if !conforms(&ty, &value, &self.scope) {
            return Err(SemanticsError::BadValue {
                name: name.to_string(),
                ty,
            });
        }
        let entry = Interpretation {
            name: name.to_string(),
            ty,
            value,
        };
        match self.constants.iter_mut().find(|c| c.name == name) {
            Some(c) => *c = entry,
            None => self.constants.push(entry),
        }
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<&Interpretation> {
        self.constants.iter().find(|c| c.name == name)
    }

    /// World mask of the worlds accessible from `w`.
    pub fn successors(&self, w: usize) -> u64 {
        self.access[w]
            .iter()
            .enumerate()
            .fold(0, |m, (v, &b)| m | (b as u64) << v)
    }

    /// World mask of the worlds at which entity `e` exists.
    pub fn existence(&self, e: usize) -> u64 {
        self.exists_at[e]
            .iter()
            .enumerate()
            .fold(0, |m, (w, &b)| m | (b as u64) << w)
    }

    /// The `existsAt` predicate as a value of type `i > prop`.
    pub fn exists_at_value(&self) -> SemValue {
        SemValue::table(
            (0..self.scope.entities)
                .map(|e| SemValue::prop(self.existence(e), self.scope.worlds))
                .collect(),
        )
    }

    pub fn satisfies_frame(&self, frame: FrameFlags) -> bool {
        let n = self.scope.worlds;
        let r = &self.access;
        let refl = !frame.refl || (0..n).all(|w| r[w][w]);
        let symm = !frame.symm || (0..n).all(|w| (0..n).all(|v| !r[w][v] || r[v][w]));
        let trans = !frame.trans
            || (0..n).all(|w| (0..n).all(|v| (0..n).all(|u| !(r[w][v] && r[v][u]) || r[w][u])));
        refl && symm && trans
    }

    /// Checks dimensions and that every interpretation fits its type.
    pub fn validate(&self) -> Result<(), SemanticsError> {
        let (n, m) = (self.scope.worlds, self.scope.entities);
        if self.access.len() != n || self.access.iter().any(|r| r.len() != n) {
            return Err(SemanticsError::Json("accessibility matrix has the wrong shape".into()));
        }
        if self.exists_at.len() != m || self.exists_at.iter().any(|r| r.len() != n) {
            return Err(SemanticsError::Json("existence matrix has the wrong shape".into()));
        }
        for c in &self.constants {
            if !conforms(&c.ty, &c.value, &self.scope) {
                return Err(SemanticsError::BadValue {
                    name: c.name.clone(),
                    ty: c.ty.clone(),
                });
            }
        }
        Ok(())
    }

    /// Deterministic JSON rendering; values are nested arrays in
    /// enumeration order of their domains.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.scope.worlds;
        let pairs: Vec<[usize; 2]> = (0..n)
            .flat_map(|w| (0..n).filter(move |&v| self.access[w][v]).map(move |v| [w, v]))
            .collect();
        let constants: Vec<_> = self
            .constants
            .iter()
            .map(|c| json!({"name": c.name, "type": c.ty.to_string(), "value": c.value.to_json()}))
            .collect();
        json!({
            "worlds": n,
            "entities": self.scope.entities,
            "accessibility": pairs,
            "exists_at": self.exists_at,
            "constants": constants,
        })
    }

    pub fn from_json(doc: &serde_json::Value) -> Result<KripkeModel, SemanticsError> {
        let err = |m: &str| SemanticsError::Json(m.to_string());
        let field = |k: &str| doc.get(k).ok_or_else(|| err(&format!("missing field `{k}`")));
        let n = field("worlds")?.as_u64().ok_or_else(|| err("`worlds` must be a number"))? as usize;
        let m = field("entities")?.as_u64().ok_or_else(|| err("`entities` must be a number"))? as usize;
        let mut model = KripkeModel::universal(Scope::new(n, m)?);
        let pairs: Vec<(usize, usize)> = serde_json::from_value(field("accessibility")?.clone())
            .map_err(|e| err(&format!("accessibility: {e}")))?;
        if pairs.iter().any(|&(w, v)| w >= n || v >= n) {
            return Err(err("accessibility pair out of range"));
        }
        model = model.with_access(&pairs);
        if let Some(ex) = doc.get("exists_at") {
            model.exists_at =
                serde_json::from_value(ex.clone()).map_err(|e| err(&format!("exists_at: {e}")))?;
        }
        for c in field("constants")?.as_array().ok_or_else(|| err("`constants` must be an array"))? {
            let name = c["name"].as_str().ok_or_else(|| err("constant without a name"))?;
            let ty = parse_type(c["type"].as_str().ok_or_else(|| err("constant without a type"))?)
                .map_err(|e| err(&format!("type of `{name}`: {e}")))?;
            let value = SemValue::from_json(&ty, &c["value"], &model.scope)?;
            model.interpret(name, ty, value)?;
        }
        model.validate()?;
        Ok(model)
    }
}
