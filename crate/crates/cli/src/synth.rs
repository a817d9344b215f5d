//! Deterministic synthetic networks for demos and tests.

use crate::errors::{CliError, CliResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rolegraph::{ConnectionSnapshot, HostId};
use std::collections::BTreeSet;

/// The classic example enterprise topology: `m` sales hosts and `n`
/// engineering hosts all talk to shared mail and web servers, and each
/// side additionally talks to its own departmental server.
pub fn figure1(m: u32, n: u32) -> CliResult<ConnectionSnapshot> {
    let host = |s: String| HostId::new(s).expect("generated ids are valid");
    let mail = host("Mail".into());
    let web = host("Web".into());
    let sales_db = host("SalesDatabase".into());
    let source_rc = host("SourceRevisionControl".into());

    let mut hosts: BTreeSet<HostId> =
        [&mail, &web, &sales_db, &source_rc].into_iter().cloned().collect();
    let mut connections = Vec::new();
    for i in 1..=m {
        let client = host(format!("Sales-{i}"));
        connections.push((client.clone(), mail.clone()));
        connections.push((client.clone(), web.clone()));
        connections.push((client.clone(), sales_db.clone()));
        hosts.insert(client);
    }
    for j in 1..=n {
        let client = host(format!("Eng-{j}"));
        connections.push((client.clone(), mail.clone()));
        connections.push((client.clone(), web.clone()));
        connections.push((client.clone(), source_rc.clone()));
        hosts.insert(client);
    }
    ConnectionSnapshot::new(format!("figure1-{m}-{n}"), hosts, connections)
        .map_err(CliError::from)
}

/// Parameters for the seeded role-structured generator.
#[derive(Debug, Clone, PartialEq)]
pub struct RolesSpec {
    pub roles: u32,
    pub hosts_min: u32,
    pub hosts_max: u32,
    pub servers_per_role: u32,
    pub share_prob: f64,
    pub seed: u64,
}

impl RolesSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.hosts_min > self.hosts_max {
            return Err(CliError::Validation(format!(
                "hosts-min ({}) cannot exceed hosts-max ({})",
                self.hosts_min, self.hosts_max
            )));
        }
        if self.servers_per_role == 0 {
            return Err(CliError::Validation(
                "servers-per-role must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.share_prob) || !self.share_prob.is_finite() {
            return Err(CliError::Validation(
                "share-prob must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Generates a role-structured network: every role gets a client
/// population that talks to the role's servers, and servers are drawn
/// from a shared pool with probability `share_prob` (modelling services
/// like mail that serve many roles) or freshly minted otherwise.
/// The seed fully determines the output.
pub fn roles(spec: &RolesSpec) -> CliResult<ConnectionSnapshot> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let host = |s: String| HostId::new(s).expect("generated ids are valid");

    let mut pool: Vec<HostId> = Vec::new();
    let mut minted = 0u64;
    let mut hosts: BTreeSet<HostId> = BTreeSet::new();
    let mut connections = Vec::new();

    for role in 0..spec.roles {
        let mut servers: Vec<HostId> = Vec::new();
        for _ in 0..spec.servers_per_role {
            let reused = !pool.is_empty() && rng.gen_bool(spec.share_prob);
            let mut candidate = if reused {
                pool[rng.gen_range(0..pool.len())].clone()
            } else {
                minted += 1;
                let fresh = host(format!("srv-{minted}"));
                pool.push(fresh.clone());
                fresh
            };
            // A role will not list the same server twice; fall back to a
            // fresh one.
            if servers.contains(&candidate) {
                minted += 1;
                candidate = host(format!("srv-{minted}"));
                pool.push(candidate.clone());
            }
            hosts.insert(candidate.clone());
            servers.push(candidate);
        }
        let population = rng.gen_range(spec.hosts_min..=spec.hosts_max);
        for client_index in 1..=population {
            let client = host(format!("h-{role}-{client_index}"));
            for server in &servers {
                connections.push((client.clone(), server.clone()));
            }
            hosts.insert(client);
        }
    }
    ConnectionSnapshot::new(
        format!("roles-{}-seed{}", spec.roles, spec.seed),
        hosts,
        connections,
    )
    .map_err(CliError::from)
}
