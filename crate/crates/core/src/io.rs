//! JSON documents for every artifact. Each document is an object whose
//! `"type"` field selects the schema.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::codes::Code;
use crate::error::{Error, Result};
use crate::field::{FpVector, PrimeField};
use crate::gap::ReductionReport;
use crate::instances::{ColoredMldInstance, MldInstance, NcpInstance, Pick, Witness};
use crate::oracles::{GapClass, GapReportCard};

#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    ColoredMld(ColoredMldInstance),
    Mld(MldInstance),
    Ncp(NcpInstance),
    Witness(Witness),
    Code(Code),
    GapReport(ReductionReport),
    Certificate(GapReportCard),
}

impl Artifact {
    pub fn type_name(&self) -> &'static str {
        match self {
            Artifact::ColoredMld(_) => "colored_mld",
            Artifact::Mld(_) => "mld",
            Artifact::Ncp(_) => "ncp",
            Artifact::Witness(_) => "witness",
            Artifact::Code(_) => "code",
            Artifact::GapReport(_) => "gap_report",
            Artifact::Certificate(_) => "certificate",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Artifact::ColoredMld(i) => colored_to_json(i),
            Artifact::Mld(i) => mld_to_json(i),
            Artifact::Ncp(i) => ncp_to_json(i),
            Artifact::Witness(w) => witness_to_json(w),
            Artifact::Code(c) => code_to_json(c),
            Artifact::GapReport(r) => gap_report_to_json(r),
            Artifact::Certificate(c) => certificate_to_json(c),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = object(v, "document")?;
        let ty = get(obj, "type")?
            .as_str()
            .ok_or_else(|| Error::parse("type", "expected a string"))?;
        Ok(match ty {
            "colored_mld" => Artifact::ColoredMld(colored_from(obj)?),
            "mld" => Artifact::Mld(mld_from(obj)?),
            "ncp" => Artifact::Ncp(ncp_from(obj)?),
            "witness" => Artifact::Witness(witness_from(obj)?),
            "code" => Artifact::Code(code_from(obj)?),
            "gap_report" => Artifact::GapReport(gap_report_from(obj)?),
            "certificate" => Artifact::Certificate(certificate_from(obj)?),
            other => return Err(Error::parse("type", format!("unknown document type {other:?}"))),
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn parse_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::parse("document", e.to_string()))?;
        Artifact::from_json(&v)
    }
}

macro_rules! from_impl {
    ($($variant:ident($ty:ty)),*) => {$(
        impl From<$ty> for Artifact {
            fn from(x: $ty) -> Self {
                Artifact::$variant(x)
            }
        }
    )*};
}

from_impl!(
    ColoredMld(ColoredMldInstance),
    Mld(MldInstance),
    Ncp(NcpInstance),
    Witness(Witness),
    Code(Code),
    GapReport(ReductionReport),
    Certificate(GapReportCard)
);

pub fn read_artifact(path: impl AsRef<Path>) -> Result<Artifact> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    Artifact::parse_str(&text)
}

pub fn write_artifact(path: impl AsRef<Path>, a: &Artifact) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, a.to_string_pretty()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn vec_json(v: &FpVector) -> Value {
    json!(v.entries())
}

fn vecs_json(vs: &[FpVector]) -> Value {
    Value::Array(vs.iter().map(vec_json).collect())
}

pub fn colored_to_json(i: &ColoredMldInstance) -> Value {
    json!({
        "type": "colored_mld",
        "p": i.field().p(),
        "d": i.d(),
        "k": i.k(),
        "classes": i.classes().iter().map(|c| vecs_json(c)).collect::<Vec<_>>(),
        "target": vec_json(i.target()),
    })
}

pub fn mld_to_json(i: &MldInstance) -> Value {
    json!({
        "type": "mld",
        "p": i.field().p(),
        "d": i.d(),
        "k": i.k(),
        "vectors": vecs_json(i.vectors()),
        "target": vec_json(i.target()),
    })
}

pub fn ncp_to_json(i: &NcpInstance) -> Value {
    json!({
        "type": "ncp",
        "p": i.field().p(),
        "m": i.m(),
        "generators": vecs_json(i.generators()),
        "target": vec_json(i.target()),
        "k": i.k(),
    })
}

fn picks_json(w: &Witness) -> Value {
    Value::Array(
        w.picks
            .iter()
            .map(|p| json!({"class": p.class, "index": p.index, "coeff": p.coeff}))
            .collect(),
    )
}

pub fn witness_to_json(w: &Witness) -> Value {
    json!({"type": "witness", "picks": picks_json(w)})
}

pub fn code_to_json(c: &Code) -> Value {
    json!({"type": "code", "sigma": c.sigma(), "m": c.m(), "words": c.words()})
}

pub fn gap_report_to_json(r: &ReductionReport) -> Value {
    json!({
        "type": "gap_report",
        "params": {
            "p": r.p,
            "k": r.k,
            "k_prime": r.k_prime,
            "d": r.d,
            "D_prime": r.d_prime,
            "sigma": r.sigma,
            "m": r.m,
            "w": r.w,
            "epsilon": r.epsilon,
            "c": r.c,
            "seed": r.seed,
            "r": r.r,
            "g": r.g,
            "code_certified": r.code_certified,
            "code_attempts": r.code_attempts,
        },
        "code": code_to_json(&r.code),
    })
}

pub fn certificate_to_json(c: &GapReportCard) -> Value {
    json!({
        "type": "certificate",
        "instance_id": c.instance_id,
        "k": c.k,
        "gamma": c.gamma,
        "exact_min": c.exact_min,
        "class": c.class.as_str(),
        "witness": c.witness.as_ref().map(witness_to_json),
        "size_cap": c.size_cap,
        "no_solution_at_any_size": c.no_solution_at_any_size,
    })
}

fn object<'a>(v: &'a Value, name: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(name, "expected an object"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::parse(key, "missing field"))
}

fn as_u64(v: &Value, name: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::parse(name, "expected a non-negative integer"))
}

fn as_usize(v: &Value, name: &str) -> Result<usize> {
    as_u64(v, name).map(|x| x as usize)
}

fn as_f64(v: &Value, name: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::parse(name, "expected a number"))
}

fn as_array<'a>(v: &'a Value, name: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(name, "expected an array"))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    as_usize(get(obj, key)?, key)
}

fn field_of(obj: &Map<String, Value>) -> Result<PrimeField> {
    let p = as_u64(get(obj, "p")?, "p")?;
    PrimeField::new(p).map_err(|_| Error::parse("p", format!("p must be prime (got {p})")))
}

/// Entries are integers; negatives are reduced mod `p`, values `>= p` are
/// rejected.
fn parse_vector(f: PrimeField, v: &Value, dim: usize, name: &str) -> Result<FpVector> {
    let arr = as_array(v, name)?;
    if arr.len() != dim {
        return Err(Error::parse(name, format!("expected {dim} entries, found {}", arr.len())));
    }
    let entries = arr
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let x = x
                .as_i64()
                .ok_or_else(|| Error::parse(format!("{name}[{i}]"), "expected an integer"))?;
            if x >= f.p() as i64 {
                return Err(Error::parse(format!("{name}[{i}]"), "entry out of field range"));
            }
            Ok(f.reduce(x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FpVector::new(f, entries).expect("entries reduced"))
}

fn parse_vectors(f: PrimeField, v: &Value, dim: usize, name: &str) -> Result<Vec<FpVector>> {
    as_array(v, name)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_vector(f, x, dim, &format!("{name}[{i}]")))
        .collect()
}

fn colored_from(obj: &Map<String, Value>) -> Result<ColoredMldInstance> {
    let f = field_of(obj)?;
    let d = usize_field(obj, "d")?;
    let k = usize_field(obj, "k")?;
    let classes = as_array(get(obj, "classes")?, "classes")?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_vectors(f, c, d, &format!("classes[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    if classes.len() != k {
        return Err(Error::parse("k", format!("k = {k} but {} classes given", classes.len())));
    }
    let target = parse_vector(f, get(obj, "target")?, d, "target")?;
    ColoredMldInstance::new(f, d, classes, target).map_err(|e| Error::parse("classes", e.to_string()))
}

fn mld_from(obj: &Map<String, Value>) -> Result<MldInstance> {
    let f = field_of(obj)?;
    let d = usize_field(obj, "d")?;
    let k = usize_field(obj, "k")?;
    let vectors = parse_vectors(f, get(obj, "vectors")?, d, "vectors")?;
    let target = parse_vector(f, get(obj, "target")?, d, "target")?;
    MldInstance::new(f, d, k, vectors, target).map_err(|e| Error::parse("vectors", e.to_string()))
}

fn ncp_from(obj: &Map<String, Value>) -> Result<NcpInstance> {
    let f = field_of(obj)?;
    let m = usize_field(obj, "m")?;
    let k = usize_field(obj, "k")?;
    let gens = parse_vectors(f, get(obj, "generators")?, m, "generators")?;
    let target = parse_vector(f, get(obj, "target")?, m, "target")?;
    NcpInstance::new(f, m, k, gens, target).map_err(|e| Error::parse("generators", e.to_string()))
}

fn picks_from(v: &Value, name: &str) -> Result<Vec<Pick>> {
    as_array(v, name)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let at = format!("{name}[{i}]");
            let o = object(p, &at)?;
            let class = match o.get("class") {
                None | Some(Value::Null) => None,
                Some(c) => Some(as_usize(c, &format!("{at}.class"))?),
            };
            let index = as_usize(
                o.get("index").ok_or_else(|| Error::parse(format!("{at}.index"), "missing field"))?,
                &format!("{at}.index"),
            )?;
            let coeff = as_u64(
                o.get("coeff").ok_or_else(|| Error::parse(format!("{at}.coeff"), "missing field"))?,
                &format!("{at}.coeff"),
            )?;
            let coeff = u32::try_from(coeff).map_err(|_| Error::parse(format!("{at}.coeff"), "coefficient too large"))?;
            Ok(Pick { class, index, coeff })
        })
        .collect()
}

fn witness_from(obj: &Map<String, Value>) -> Result<Witness> {
    Ok(Witness::new(picks_from(get(obj, "picks")?, "picks")?))
}

fn code_from(obj: &Map<String, Value>) -> Result<Code> {
    let sigma = as_u64(get(obj, "sigma")?, "sigma")?;
    let m = usize_field(obj, "m")?;
    let words = as_array(get(obj, "words")?, "words")?
        .iter()
        .enumerate()
        .map(|(i, w)| {
            as_array(w, &format!("words[{i}]"))?
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let name = format!("words[{i}][{j}]");
                    let s = as_u64(s, &name)?;
                    u32::try_from(s).map_err(|_| Error::parse(name, "symbol too large"))
                })
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Code::new(sigma, m, words).map_err(|e| Error::parse("words", e.to_string()))
}

fn opt_bool(obj: &Map<String, Value>, key: &str) -> Result<Option<bool>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Bool(b)) => Ok(Some(*b)),
        Some(_) => Err(Error::parse(key, "expected a boolean or null")),
    }
}

fn gap_report_from(obj: &Map<String, Value>) -> Result<ReductionReport> {
    let params = object(get(obj, "params")?, "params")?;
    let u = |k: &str| -> Result<usize> {
        as_usize(
            params.get(k).ok_or_else(|| Error::parse(format!("params.{k}"), "missing field"))?,
            &format!("params.{k}"),
        )
    };
    let code = code_from(object(get(obj, "code")?, "code")?)?;
    let p = u("p")?;
    let p = u32::try_from(p).map_err(|_| Error::parse("params.p", "too large"))?;
    Ok(ReductionReport {
        p,
        k: u("k")?,
        k_prime: u("k_prime")?,
        d: u("d")?,
        d_prime: u("D_prime")?,
        sigma: u("sigma")? as u64,
        m: u("m")?,
        w: u("w")?,
        epsilon: as_f64(
            params.get("epsilon").ok_or_else(|| Error::parse("params.epsilon", "missing field"))?,
            "params.epsilon",
        )?,
        c: u("c")? as u64,
        seed: as_u64(
            params.get("seed").ok_or_else(|| Error::parse("params.seed", "missing field"))?,
            "params.seed",
        )?,
        r: u("r")? as u32,
        g: u("g")?,
        code_certified: opt_bool(params, "code_certified")?,
        code_attempts: u("code_attempts")?,
        code,
    })
}

fn certificate_from(obj: &Map<String, Value>) -> Result<GapReportCard> {
    let class_str = get(obj, "class")?
        .as_str()
        .ok_or_else(|| Error::parse("class", "expected a string"))?;
    let class = GapClass::parse(class_str).ok_or_else(|| Error::parse("class", format!("unknown class {class_str:?}")))?;
    let instance_id = match obj.get("instance_id") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(Error::parse("instance_id", "expected a string or null")),
    };
    let exact_min = match obj.get("exact_min") {
        None | Some(Value::Null) => None,
        Some(v) => Some(as_usize(v, "exact_min")?),
    };
    let witness = match obj.get("witness") {
        None | Some(Value::Null) => None,
        Some(v) => Some(witness_from(object(v, "witness")?)?),
    };
    Ok(GapReportCard {
        instance_id,
        k: usize_field(obj, "k")?,
        gamma: as_f64(get(obj, "gamma")?, "gamma")?,
        exact_min,
        class,
        witness,
        size_cap: match obj.get("size_cap") {
            None => 0,
            Some(v) => as_usize(v, "size_cap")?,
        },
        no_solution_at_any_size: opt_bool(obj, "no_solution_at_any_size")?.unwrap_or(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_certified_no, gen_planted_yes};
    use proptest::prelude::*;

    fn round_trip(a: Artifact) {
        let s = a.to_string_pretty();
        assert_eq!(Artifact::parse_str(&s).unwrap(), a);
        assert_eq!(Artifact::parse_str(&s).unwrap().to_string_pretty(), s);
    }

    #[test]
    fn instance_round_trips() {
        let (inst, w) = gen_planted_yes(3, 2, 4, 3, 11).unwrap();
        round_trip(inst.clone().into());
        round_trip(w.into());
        round_trip(crate::gap::colored_to_uncolored(&inst).into());
        round_trip(gen_certified_no(2, 2, 4, 2, 3, 100).unwrap().into());
    }

    #[test]
    fn rejects_bad_documents() {
        let e = Artifact::parse_str(r#"{"type":"mld","p":4,"d":1,"k":1,"vectors":[[1]],"target":[1]}"#).unwrap_err();
        assert!(e.to_string().contains("p must be prime"), "{e}");
        let e = Artifact::parse_str(r#"{"type":"mld","p":3,"d":1,"k":1,"vectors":[[3]],"target":[1]}"#).unwrap_err();
        assert!(e.to_string().contains("entry out of field range"), "{e}");
        assert!(e.to_string().contains("vectors[0][0]"), "{e}");
        let e = Artifact::parse_str(r#"{"type":"ncp","p":3,"m":1,"generators":[[1]],"target":[1]}"#).unwrap_err();
        assert_eq!(e, Error::parse("k", "missing field"));
        assert!(Artifact::parse_str(r#"{"type":"bogus"}"#).is_err());
        assert!(Artifact::parse_str("[1,2]").is_err());
    }

    #[test]
    fn negative_entries_reduce() {
        let a = Artifact::parse_str(r#"{"type":"mld","p":5,"d":2,"k":1,"vectors":[[-1,2]],"target":[-5,0]}"#).unwrap();
        let Artifact::Mld(m) = a else { panic!() };
        assert_eq!(m.vectors()[0].entries(), &[4, 2]);
        assert_eq!(m.target().entries(), &[0, 0]);
    }

    #[test]
    fn schema_field_names() {
        let (inst, _) = gen_planted_yes(2, 1, 2, 2, 0).unwrap();
        let v = colored_to_json(&inst);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["type", "p", "d", "k", "classes", "target"]);
        let w = witness_to_json(&Witness::unit_flat(&[0]));
        assert_eq!(w["picks"][0]["class"], Value::Null);
    }

    fn arb_witness() -> impl Strategy<Value = Witness> {
        prop::collection::vec((prop::option::of(0usize..5), 0usize..10, 1u32..7), 0..6).prop_map(|ps| {
            Witness::new(ps.into_iter().map(|(class, index, coeff)| Pick { class, index, coeff }).collect())
        })
    }

    proptest! {
        #[test]
        fn generated_instances_round_trip(p in prop_oneof![Just(2u64), Just(3), Just(7)], k in 1usize..4, d in 1usize..5, n in 1usize..4, seed: u64) {
            let (inst, w) = gen_planted_yes(p, k, d, n, seed).unwrap();
            round_trip(inst.into());
            round_trip(w.into());
        }

        #[test]
        fn witnesses_round_trip(w in arb_witness()) {
            round_trip(w.into());
        }
    }
}
