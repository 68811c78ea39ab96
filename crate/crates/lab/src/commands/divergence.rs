use qcompound::divergences::{
    d_max, hypothesis_test_divergence, i_h, i_max, mutual_information, relative_entropy,
    relative_entropy_variance,
};
use qcompound::qcore::{hermitian_eig, trace_product, DensityMatrix};
use qcompound::ATOL;
use serde_json::json;

use crate::cli::DivergenceArgs;
use crate::config::{need, open_unit};
use crate::error::{LabError, LabResult};
use crate::matrix_file::{read_matrix, state_from};
use crate::record::{num, Record};

fn load(rec: &mut Record, name: &str, path: &std::path::Path) -> LabResult<DensityMatrix> {
    let (file, bytes) = read_matrix(path)?;
    rec.input(name, path, &bytes);
    state_from(file)
}

pub fn run(mut a: DivergenceArgs) -> LabResult<Record> {
    a.kind.get_or_insert_with(|| "dh".into());
    a.eps.get_or_insert(0.1);
    a.tol.get_or_insert(1e-6);
    let mut rec = Record::new("divergence", serde_json::to_value(&a).expect("args serialize"));
    let kind = need(&a.kind, "kind")?;
    let eps = open_unit(need(&a.eps, "eps")?, "eps")?;
    let rho = load(&mut rec, "rho", &need(&a.rho, "rho")?)?;
    let mut sigma = || -> LabResult<DensityMatrix> {
        let path = need(&a.sigma, "sigma")?;
        load(&mut rec, "sigma", &path)
    };

    let mut extra = serde_json::Map::new();
    let mut feasibility = None;
    let value = match kind.as_str() {
        "dh" => {
            let s = sigma()?;
            let r = hypothesis_test_divergence(&rho, &s, eps)?;
            feasibility = Some((r.test.matrix.clone(), trace_product(&r.test.matrix, rho.matrix()).re));
            extra.insert("type1_error".into(), num(r.test.type1_error));
            extra.insert("type2".into(), num(r.test.type2_bound));
            r.value
        }
        "ih" => {
            let r = i_h(&rho, eps)?;
            feasibility = Some((r.test.matrix.clone(), trace_product(&r.test.matrix, rho.matrix()).re));
            extra.insert("type1_error".into(), num(r.test.type1_error));
            extra.insert("type2".into(), num(r.test.type2_bound));
            extra.insert("gap".into(), num(r.gap));
            r.value
        }
        "d" => relative_entropy(&rho, &sigma()?)?,
        "v" => relative_entropy_variance(&rho, &sigma()?)?,
        "dmax" => d_max(&rho, &sigma()?)?.value,
        "imax" => i_max(&rho)?.value,
        "mi" => mutual_information(&rho)?,
        other => return Err(LabError::Config(format!("unknown divergence kind `{other}`"))),
    };

    if let Some((m, accepted)) = feasibility {
        let e = hermitian_eig(&m)?;
        let ok = e.min() >= -ATOL && e.max() <= 1.0 + ATOL && accepted >= 1.0 - eps - ATOL;
        rec.check(
            "test_feasible",
            ok,
            format!("spectrum [{:.3e}, {:.12}], Tr[M rho] = {accepted:.12}", e.min(), e.max()),
        );
    }
    if let Some(expect) = a.expect {
        let tol = need(&a.tol, "tol")?;
        let diff = (value - expect).abs();
        rec.check("expected_value", diff <= tol, format!("|{value} - {expect}| = {diff:.3e} (tol {tol:e})"));
    }
    let mut results = json!({ "kind": kind, "value": num(value) });
    results.as_object_mut().expect("object").extend(extra);
    rec.results = results;
    Ok(rec)
}
