//! Synthetic inputs shared by the benchmarks.

use chrono::{DateTime, Duration, TimeZone, Utc};
use influence_core::metrics::compute_profile;
use influence_core::ontology::{default_base, triplify};
use influence_core::{AccountSnapshot, TripleStore, Tweet};

pub fn reference_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2024, 3, 1, 12, 0, 0).unwrap()
}

/// A full 100-tweet timeline for `name` that mentions and replies to `peers`.
pub fn snapshot(name: &str, peers: &[String]) -> AccountSnapshot {
    let now = reference_time();
    let timeline = (0..100u64)
        .map(|i| {
            let mut t = Tweet::new(format!("{name}{i}"), now - Duration::minutes(30 * (i as i64 + 1)));
            t.retweet_count = (i * 37) % 23;
            t.favorite_count = (i * 11) % 31;
            t.is_retweet = i % 7 == 6;
            if let Some(peer) = peers.get(i as usize % peers.len().max(1)) {
                t.mentions.insert(peer.clone());
                if i % 3 == 0 {
                    t.in_reply_to = Some(peer.clone());
                }
            }
            t.hashtags.insert(format!("tag{}", i % 5));
            if i % 10 == 0 {
                t.urls.insert(format!("https://example.org/{name}/{i}"));
            }
            t
        })
        .collect();
    AccountSnapshot {
        screen_name: name.to_string(),
        display_name: name.to_uppercase(),
        description: format!("synthetic account {name}"),
        protected: false,
        followers: 1000 + name.len() as u64 * 997,
        following: 150,
        total_tweets: 5000,
        retrieved_at: now,
        timeline,
    }
}

/// A store holding `accounts` triplified synthetic accounts that refer to each other.
pub fn populated_store(accounts: usize) -> TripleStore {
    let names: Vec<String> = (0..accounts).map(|i| format!("user{i}")).collect();
    let mut store = TripleStore::new();
    for (i, name) in names.iter().enumerate() {
        let peers: Vec<String> = (1..=4).map(|k| names[(i + k * 7) % accounts].clone()).collect();
        let snap = snapshot(name, &peers);
        let profile = compute_profile(&snap, reference_time()).expect("synthetic snapshot is valid");
        store.load(&triplify(&snap, &profile.general, &profile.quality, &default_base()));
    }
    store
}
