//! The inspection subcommands: `describe` prints the derived analysis of
//! each kernel or Young function, `norm`/`seminorm` evaluate functions, and
//! `critical` exports the φ/w curves.

use nonlocal_core::error::CoreError;
use nonlocal_core::fields::nonlocal_seminorm;
use nonlocal_core::fields::SeminormBudget;
use nonlocal_core::kernels::{w_profile, Kernel};
use nonlocal_core::orlicz::luxemburg_norm;
use nonlocal_core::young::{asymptotic_rates, critical_young, growth_theta, YoungFunction};

use crate::config::ExperimentConfig;
use crate::suites;

pub fn describe(cfg: &ExperimentConfig) {
    for kspec in &cfg.kernels {
        println!("kernel {}", kspec.name);
        describe_kernel(&kspec.kernel, cfg);
        println!();
    }
    for pspec in &cfg.phis {
        println!("phi {}", pspec.name);
        describe_phi(&pspec.phi);
        println!();
    }
}

fn describe_kernel(kernel: &Kernel, cfg: &ExperimentConfig) {
    println!("  d = {}, p = {}", kernel.dimension, kernel.exponent);
    match kernel.levy_modular() {
        Ok(v) => println!("  p-Lévy modular ∫(1∧|h|^p)ν = {v:.6e}"),
        Err(e) => {
            println!("  {e}");
            return;
        }
    }
    match kernel.almost_decreasing_kappa() {
        Ok(kappa) => println!("  κ = {kappa:.6}"),
        Err(e) => println!("  κ: {e}"),
    }
    let w = match w_profile(kernel, cfg.mode) {
        Ok(w) => w,
        Err(e @ CoreError::WSaturates { .. }) => {
            println!("  {e}");
            return;
        }
        Err(e) => {
            println!("  w profile: {e}");
            return;
        }
    };
    let phi = match critical_young(&w) {
        Ok(phi) => phi,
        Err(e) => {
            println!("  critical function: {e}");
            return;
        }
    };
    let (c, q) = phi.curve().fit_power(1e-2, 1e2);
    println!(
        "  φ(t) ≈ {c:.4}·t^{q:.4} on the middle decades; endpoint exponents ({:.4}, {:.4})",
        phi.curve().head_exponent(),
        phi.curve().tail_exponent()
    );
    match growth_theta(&phi) {
        Ok(theta) => println!("  θ = {theta:.6}"),
        Err(e @ CoreError::GrowthFails { .. }) => {
            println!("  growth condition fails; use per-component verification");
            println!("    detail: {e}");
        }
        Err(e) => println!("  θ: {e}"),
    }
    match asymptotic_rates(&phi, kernel) {
        Ok(rates) => {
            println!(
                "  N-function: {}; φ_p N-function: {}",
                rates.n_function, rates.n_function_p
            );
            println!(
                "  φ(t)/t^p: {:.6e} at grid min, {:.6e} at grid max{}",
                rates.ratio_small_t,
                rates.ratio_large_t,
                match rates.nu_l1 {
                    Some(l1) => format!(" (‖ν‖_L¹ = {l1:.6e})"),
                    None => String::new(),
                }
            );
            for (r, lhs, rhs) in rates.residuals {
                println!("  residual identity at r = {r}: {lhs:.6e} vs {rhs:.6e}");
            }
        }
        Err(e) => println!("  asymptotics: {e}"),
    }
}

fn describe_phi(phi: &YoungFunction) {
    let (c, q) = phi.curve().fit_power(1e-2, 1e2);
    println!(
        "  φ(t) ≈ {c:.4}·t^{q:.4}; endpoints ({:.4}, {:.4}); p = {}",
        phi.curve().head_exponent(),
        phi.curve().tail_exponent(),
        phi.p
    );
    println!("  possibly non-convex: {}", phi.possibly_nonconvex);
    match growth_theta(phi) {
        Ok(theta) => println!("  θ = {theta:.6}"),
        Err(e) => println!("  θ: {e}"),
    }
}

/// Luxemburg norms of every configured function, under the first [phi]
/// section if present, else the first kernel's critical function.
pub fn norm(cfg: &ExperimentConfig) -> Result<(), String> {
    let phi = if let Some(p) = cfg.phis.first() {
        p.phi.clone()
    } else {
        let kspec = cfg.kernels.first().ok_or("norm needs a [kernel] or [phi] section")?;
        let w = w_profile(&kspec.kernel, cfg.mode).map_err(|e| e.to_string())?;
        critical_young(&w).map_err(|e| e.to_string())?
    };
    for fspec in &cfg.functions {
        match luxemburg_norm(&fspec.field, &phi) {
            Ok(r) => println!(
                "norm {} = {:.9e} (error ≤ {:.1e}, {} bisection steps)",
                fspec.name, r.value, r.error_estimate, r.iterations
            ),
            Err(e) => println!("norm {}: {e}", fspec.name),
        }
    }
    Ok(())
}

pub fn seminorm(cfg: &ExperimentConfig) -> Result<(), String> {
    if cfg.kernels.is_empty() {
        return Err("seminorm needs a [kernel] section".into());
    }
    for kspec in &cfg.kernels {
        for fspec in &cfg.functions {
            match nonlocal_seminorm(&fspec.field, &kspec.kernel, SeminormBudget::default()) {
                Ok(r) => println!(
                    "seminorm^p {} / {} = {:.9e} (error ≈ {:.2e}{})",
                    kspec.name,
                    fspec.name,
                    r.value,
                    r.error_estimate,
                    if r.converged { "" } else { "; refinement not converged" }
                ),
                Err(e) => println!("seminorm {} / {}: {e}", kspec.name, fspec.name),
            }
        }
    }
    Ok(())
}

/// Build and export the critical-function curves for each kernel.
pub fn critical(cfg: &ExperimentConfig) -> Result<(), String> {
    let curves = suites::kernel_curves(cfg);
    std::fs::create_dir_all(cfg.out_dir.join("curves")).map_err(|e| e.to_string())?;
    for (name, content) in &curves {
        std::fs::write(cfg.out_dir.join("curves").join(name), content)
            .map_err(|e| e.to_string())?;
        println!("wrote curves/{name}");
    }
    for kspec in &cfg.kernels {
        if let Ok(w) = w_profile(&kspec.kernel, cfg.mode) {
            if let Ok(phi) = critical_young(&w) {
                let theta = growth_theta(&phi)
                    .map(|t| format!("{t:.6}"))
                    .unwrap_or_else(|_| "n/a (growth fails)".into());
                let kappa = kspec
                    .kernel
                    .almost_decreasing_kappa()
                    .map(|k| format!("{k:.6}"))
                    .unwrap_or_else(|e| e.to_string());
                println!(
                    "critical {}: endpoints ({:.4}, {:.4}), θ = {theta}, κ = {kappa}",
                    kspec.name,
                    phi.curve().head_exponent(),
                    phi.curve().tail_exponent()
                );
            }
        }
    }
    Ok(())
}
