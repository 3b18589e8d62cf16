//! Renderers for the table-producing commands: `frontier`, `convergents`,
//! `ell`, and `jumps`, each in aligned text, CSV, and JSON.

use num_bigint::BigUint;
use pqscp::{ell_value, jump_indices, z_set, BelowTerm, ConvergentTable, Params, Result};

use crate::{pretty, OutFormat};

/// The frontier set `Z_m` with its weights, argmax marks, and a summary.
pub fn render_frontier(params: &Params, m: &BigUint, format: OutFormat) -> Result<String> {
    let set = z_set(params, m)?;
    let argmax = set.argmax_h_indices();
    let z_index = set.z_index();
    let is_max = |i: usize| argmax.contains(&i);

    match format {
        OutFormat::Csv => {
            let mut out = String::from("a,b,value,h,max\n");
            for (i, point) in set.points().iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    point.a,
                    point.b,
                    set.values()[i],
                    set.h_values()[i],
                    u8::from(is_max(i)),
                ));
            }
            Ok(out)
        }
        OutFormat::Json => {
            let rows: Vec<serde_json::Value> = set
                .points()
                .iter()
                .enumerate()
                .map(|(i, point)| {
                    serde_json::json!({
                        "a": point.a,
                        "b": point.b,
                        "value": set.values()[i].to_string(),
                        "h": set.h_values()[i].to_string(),
                    })
                })
                .collect();
            Ok(pretty(&serde_json::json!({
                "m": m.to_string(),
                "p": params.p(),
                "q": params.q(),
                "rows": rows,
                "max_index": argmax[0],
            })))
        }
        OutFormat::Text => {
            let val_w = set
                .values()
                .iter()
                .map(|v| v.to_string().len())
                .max()
                .unwrap_or(1)
                .max(5);
            let h_w = set
                .h_values()
                .iter()
                .map(|v| v.to_string().len())
                .max()
                .unwrap_or(1)
                .max(1);
            let mut out = format!(
                "frontier Z_m for m = {m}, (p, q) = ({}, {})\n",
                params.p(),
                params.q()
            );
            out.push_str(&format!(
                "{:>4} {:>4}  {:>val_w$}  {:>h_w$}\n",
                "a", "b", "value", "h"
            ));
            for (i, point) in set.points().iter().enumerate() {
                out.push_str(&format!(
                    "{:>4} {:>4}  {:>val_w$}  {:>h_w$}{}\n",
                    point.a,
                    point.b,
                    set.values()[i].to_string(),
                    set.h_values()[i].to_string(),
                    if is_max(i) { "  *" } else { "" },
                ));
            }
            let g = &set.h_values()[argmax[0]];
            let at: Vec<String> = argmax
                .iter()
                .map(|&i| format!("({}, {})", set.points()[i].a, set.points()[i].b))
                .collect();
            out.push_str(&format!(
                "G({m}) = {g} at (a, b) = {}; z_m = {} at ({}, {})\n",
                at.join(", "),
                set.values()[z_index],
                set.points()[z_index].a,
                set.points()[z_index].b,
            ));
            Ok(out)
        }
    }
}

/// Decimal rendering for the small certified reals in these tables.
fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() >= 1e-6 {
        format!("{x:.12}")
    } else {
        format!("{x:.6e}")
    }
}

/// Stream membership in terms of the convergent denominators.
fn stream_form(term: &BelowTerm) -> String {
    if term.t == 0 {
        format!("k_{}", 2 * term.s)
    } else {
        format!("k_{} + {}*k_{}", 2 * term.s, term.t, 2 * term.s + 1)
    }
}

/// Partial quotients, convergents, and the best-from-below stream of
/// `rho = log_p q`.
pub fn render_convergents(
    params: &Params,
    depth: usize,
    terms: usize,
    prec: u32,
    format: OutFormat,
) -> Result<String> {
    let mut table = ConvergentTable::new(*params);
    let rho = table.rho_certified(prec).to_f64();

    let mut conv = Vec::with_capacity(depth);
    for i in 0..depth {
        let a = table.quotient(i)?;
        let h = table.h(i)?;
        let k = table.k(i)?;
        let eps = table.eps_interval(i, prec)?.to_f64();
        conv.push((i, a, h, k, fmt_real(eps)));
    }
    let mut stream = Vec::with_capacity(terms);
    for term in table.below_terms(terms)? {
        let frac = table.frac_k(term.s, term.t, prec)?.to_f64();
        stream.push((term, fmt_real(frac)));
    }

    match format {
        OutFormat::Csv => {
            let mut out = String::from("i,a,h,k,eps\n");
            for (i, a, h, k, eps) in &conv {
                out.push_str(&format!("{i},{a},{h},{k},{eps}\n"));
            }
            out.push('\n');
            out.push_str("n,K,H,s,t,frac\n");
            for (term, frac) in &stream {
                out.push_str(&format!(
                    "{},{},{},{},{},{frac}\n",
                    term.n, term.k, term.h, term.s, term.t
                ));
            }
            Ok(out)
        }
        OutFormat::Json => {
            let conv_rows: Vec<serde_json::Value> = conv
                .iter()
                .map(|(i, a, h, k, eps)| {
                    serde_json::json!({ "i": i, "a": a, "h": h, "k": k, "eps": eps })
                })
                .collect();
            let stream_rows: Vec<serde_json::Value> = stream
                .iter()
                .map(|(term, frac)| {
                    serde_json::json!({
                        "n": term.n,
                        "k": term.k,
                        "h": term.h,
                        "s": term.s,
                        "t": term.t,
                        "frac": frac,
                    })
                })
                .collect();
            Ok(pretty(&serde_json::json!({
                "p": params.p(),
                "q": params.q(),
                "rho": format!("{rho:.12}"),
                "convergents": conv_rows,
                "stream": stream_rows,
            })))
        }
        OutFormat::Text => {
            let mut out = format!(
                "rho = log_{} {} ~ {rho:.12}\n",
                params.p(),
                params.q()
            );
            out.push_str("convergents h_i / k_i with gaps eps_i = |k_i rho - h_i|:\n");
            let h_w = conv.iter().map(|c| c.2.to_string().len()).max().unwrap_or(3).max(3);
            let k_w = conv.iter().map(|c| c.3.to_string().len()).max().unwrap_or(3).max(3);
            out.push_str(&format!(
                "{:>4} {:>4} {:>h_w$} {:>k_w$}  {:>16}\n",
                "i", "a_i", "h_i", "k_i", "eps_i"
            ));
            for (i, a, h, k, eps) in &conv {
                out.push_str(&format!(
                    "{i:>4} {a:>4} {h:>h_w$} {k:>k_w$}  {eps:>16}\n"
                ));
            }
            out.push_str("\nstream of best-from-below denominators K_n (terms k_2s + t*k_2s+1):\n");
            let kk_w = stream
                .iter()
                .map(|(t, _)| t.k.to_string().len())
                .max()
                .unwrap_or(3)
                .max(3);
            out.push_str(&format!(
                "{:>4} {:>kk_w$} {:>kk_w$} {:>3} {:>3}  {:>16}  membership\n",
                "n", "K_n", "H_n", "s", "t", "frac(K_n rho)"
            ));
            for (term, frac) in &stream {
                out.push_str(&format!(
                    "{:>4} {:>kk_w$} {:>kk_w$} {:>3} {:>3}  {frac:>16}  {}\n",
                    term.n,
                    term.k,
                    term.h,
                    term.s,
                    term.t,
                    stream_form(term)
                ));
            }
            Ok(out)
        }
    }
}

/// The boundary sequence `ell_b` for `b = 0..=max`, marking jumps.
pub fn render_ell(params: &Params, max: u64, format: OutFormat) -> Result<String> {
    let mut table = ConvergentTable::new(*params);
    let mut rows = Vec::with_capacity(max as usize + 1);
    let mut prev = 0u64;
    for b in 0..=max {
        let ell = ell_value(&mut table, b)?;
        let jumped = b > 0 && ell > prev;
        let form = if jumped {
            let term = table.last_below_leq(b)?;
            debug_assert_eq!(term.k, b);
            Some(stream_form(&term))
        } else {
            None
        };
        rows.push((b, ell, form));
        prev = ell;
    }

    match format {
        OutFormat::Csv => {
            let mut out = String::from("b,ell,jump,form\n");
            for (b, ell, form) in &rows {
                out.push_str(&format!(
                    "{b},{ell},{},{}\n",
                    u8::from(form.is_some()),
                    form.as_deref().unwrap_or("")
                ));
            }
            Ok(out)
        }
        OutFormat::Json => {
            let values: Vec<serde_json::Value> = rows
                .iter()
                .map(|(b, ell, form)| {
                    serde_json::json!({
                        "b": b,
                        "ell": ell,
                        "jump": form.is_some(),
                        "form": form,
                    })
                })
                .collect();
            Ok(pretty(&serde_json::json!({
                "p": params.p(),
                "q": params.q(),
                "max": max,
                "rows": values,
            })))
        }
        OutFormat::Text => {
            let mut out = format!(
                "boundary exponents ell_b for (p, q) = ({}, {}), b <= {max}\n",
                params.p(),
                params.q()
            );
            let b_w = rows.last().map(|r| r.0.to_string().len()).unwrap_or(1).max(2);
            let e_w = rows
                .iter()
                .map(|r| r.1.to_string().len())
                .max()
                .unwrap_or(1)
                .max(5);
            out.push_str(&format!("{:>b_w$}  {:>e_w$}  jump\n", "b", "ell_b"));
            for (b, ell, form) in &rows {
                match form {
                    Some(form) => out.push_str(&format!(
                        "{b:>b_w$}  {ell:>e_w$}  * (b = {form})\n"
                    )),
                    None => out.push_str(&format!("{b:>b_w$}  {ell:>e_w$}\n")),
                }
            }
            Ok(out)
        }
    }
}

/// The first jump positions of `ell`, each with its stream witness.
pub fn render_jumps(params: &Params, count: usize, format: OutFormat) -> Result<String> {
    let mut table = ConvergentTable::new(*params);
    let jumps = jump_indices(&mut table, count)?;
    let mut rows = Vec::with_capacity(jumps.len());
    for jump in &jumps {
        let term = table.last_below_leq(jump.index)?;
        debug_assert_eq!(term.k, jump.index);
        rows.push((jump.index, jump.value, stream_form(&term)));
    }

    match format {
        OutFormat::Csv => {
            let mut out = String::from("n,index,ell,form\n");
            for (n, (index, ell, form)) in rows.iter().enumerate() {
                out.push_str(&format!("{},{index},{ell},{form}\n", n + 1));
            }
            Ok(out)
        }
        OutFormat::Json => {
            let values: Vec<serde_json::Value> = rows
                .iter()
                .enumerate()
                .map(|(n, (index, ell, form))| {
                    serde_json::json!({
                        "n": n + 1,
                        "index": index,
                        "ell": ell,
                        "form": form,
                    })
                })
                .collect();
            Ok(pretty(&serde_json::json!({
                "p": params.p(),
                "q": params.q(),
                "count": count,
                "jumps": values,
            })))
        }
        OutFormat::Text => {
            let mut out = format!(
                "first {count} jumps of ell for (p, q) = ({}, {})\n",
                params.p(),
                params.q()
            );
            let i_w = rows
                .iter()
                .map(|r| r.0.to_string().len())
                .max()
                .unwrap_or(1)
                .max(5);
            let e_w = rows
                .iter()
                .map(|r| r.1.to_string().len())
                .max()
                .unwrap_or(1)
                .max(3);
            out.push_str(&format!(
                "{:>4}  {:>i_w$}  {:>e_w$}  membership\n",
                "n", "b=j_n", "ell"
            ));
            for (n, (index, ell, form)) in rows.iter().enumerate() {
                out.push_str(&format!(
                    "{:>4}  {index:>i_w$}  {ell:>e_w$}  j_{} = {form} = {index}\n",
                    n + 1,
                    n + 1,
                ));
            }
            Ok(out)
        }
    }
}
