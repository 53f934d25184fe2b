//! Influence measures computed from an account's latest (at most 100) tweets.
//!
//! The quality side is a pair of h-indexes over the retweet and favorite
//! counts of the account's own tweets. The retweet h-index is turned into a
//! number of "adjusted tweets" that are credited back to the account, and the
//! Influence Metric combines that with the tweet rate, the order of magnitude
//! of the follower count and a damped followers-to-following ratio:
//!
//! ```text
//! influence = (tweets_k + adjusted) / hours_since_kth
//!             * oom(followers)
//!             * log10(followers / following + 1)
//! ```

use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::decimal::serialize3;

/// Upper bound on the timeline window.
pub const MAX_TIMELINE: usize = 100;

/// Lower bound applied to the window span, in hours.
pub const MIN_WINDOW_HOURS: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("h-index must be a finite nonnegative number, got {0}")]
    InvalidHIndex(f64),
    #[error("tweet {id} was created at {created_at}, after the reference time {now}")]
    TweetInFuture {
        id: String,
        created_at: DateTime<Utc>,
        now: DateTime<Utc>,
    },
    #[error("timeline holds {0} tweets, the window is capped at {MAX_TIMELINE}")]
    TimelineTooLong(usize),
    #[error("timeline is not ordered newest-first at position {0}")]
    TimelineOrder(usize),
    #[error("screen name is empty")]
    EmptyScreenName,
    #[error("window span must be at least {MIN_WINDOW_HOURS} hour, got {0}")]
    InvalidWindow(f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub retweet_count: u64,
    pub favorite_count: u64,
    /// The account's retweet of someone else's tweet.
    pub is_retweet: bool,
    pub in_reply_to: Option<String>,
    /// Hashtag texts without the leading `#`.
    pub hashtags: BTreeSet<String>,
    pub urls: BTreeSet<String>,
    pub image_urls: BTreeSet<String>,
    pub mentions: BTreeSet<String>,
}

impl Tweet {
    pub fn new(id: impl Into<String>, created_at: DateTime<Utc>) -> Self {
        Tweet {
            id: id.into(),
            created_at,
            retweet_count: 0,
            favorite_count: 0,
            is_retweet: false,
            in_reply_to: None,
            hashtags: BTreeSet::new(),
            urls: BTreeSet::new(),
            image_urls: BTreeSet::new(),
            mentions: BTreeSet::new(),
        }
    }
}

/// An account as seen at `retrieved_at`, with its newest-first timeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccountSnapshot {
    pub screen_name: String,
    pub display_name: String,
    pub description: String,
    pub protected: bool,
    pub followers: u64,
    pub following: u64,
    pub total_tweets: u64,
    pub retrieved_at: DateTime<Utc>,
    pub timeline: Vec<Tweet>,
}

impl AccountSnapshot {
    pub fn validate(&self) -> Result<(), MetricsError> {
        if self.screen_name.is_empty() {
            return Err(MetricsError::EmptyScreenName);
        }
        if self.timeline.len() > MAX_TIMELINE {
            return Err(MetricsError::TimelineTooLong(self.timeline.len()));
        }
        if let Some(i) = self
            .timeline
            .windows(2)
            .position(|pair| pair[0].created_at < pair[1].created_at)
        {
            return Err(MetricsError::TimelineOrder(i + 1));
        }
        check_not_after(&self.timeline, self.retrieved_at)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimelineWindow {
    /// Number of retrieved tweets.
    pub tweets_k: u64,
    /// Hours between the oldest retrieved tweet and the reference time, floored at one hour.
    #[serde(serialize_with = "serialize3")]
    pub hours_since_kth: f64,
    #[serde(serialize_with = "serialize3")]
    pub tweets_per_day: f64,
    #[serde(serialize_with = "serialize3")]
    pub rt_percent: f64,
    #[serde(serialize_with = "serialize3")]
    pub reply_ratio: f64,
}

impl TimelineWindow {
    pub const EMPTY: TimelineWindow = TimelineWindow {
        tweets_k: 0,
        hours_since_kth: MIN_WINDOW_HOURS,
        tweets_per_day: 0.0,
        rt_percent: 0.0,
        reply_ratio: 0.0,
    };

    /// Window over `tweets_k` tweets spanning `hours`, with no retweets or replies.
    pub fn spanning(tweets_k: u64, hours: f64) -> Self {
        let hours = hours.max(MIN_WINDOW_HOURS);
        TimelineWindow {
            tweets_k,
            hours_since_kth: hours,
            tweets_per_day: 24.0 * tweets_k as f64 / hours,
            ..Self::EMPTY
        }
    }
}

/// The mantissa/exponent form of `h*h` credited to the account as extra tweets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustedTweets {
    pub mantissa: f64,
    pub exponent: u32,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralInfo {
    pub tweets: u64,
    #[serde(serialize_with = "serialize3")]
    pub tweets_per_day: f64,
    #[serde(serialize_with = "serialize3")]
    pub rt_percent: f64,
    pub followers: u64,
    pub following: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QualityMetrics {
    #[serde(serialize_with = "serialize3")]
    pub h_index_rt: f64,
    #[serde(serialize_with = "serialize3")]
    pub h_index_fav: f64,
    #[serde(serialize_with = "serialize3")]
    pub h_index_rt_daily: f64,
    #[serde(serialize_with = "serialize3")]
    pub h_index_fav_daily: f64,
    #[serde(serialize_with = "serialize3")]
    pub reply_ratio: f64,
    #[serde(serialize_with = "serialize3")]
    pub influence_metric: f64,
}

/// Everything computed for one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccountProfile {
    pub general: GeneralInfo,
    pub quality: QualityMetrics,
    pub window: TimelineWindow,
}

/// Largest `h` such that at least `h` of the counts are `>= h`.
pub fn h_index(counts: &[u64]) -> u64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(rank, &count)| count > rank as u64)
        .count() as u64
}

/// Squares `h` (only when `h >= 1`), keeps the two leading digits of the
/// result as the mantissa and folds the remaining magnitude in linearly:
/// `value = mantissa / 10 + 10 * exponent`.
///
/// ```
/// use influence_core::metrics::adjusted_tweets;
/// assert!((adjusted_tweets(15.0).unwrap().value - 12.2).abs() < 1e-9);
/// ```
pub fn adjusted_tweets(h: f64) -> Result<AdjustedTweets, MetricsError> {
    if !h.is_finite() || h < 0.0 {
        return Err(MetricsError::InvalidHIndex(h));
    }
    let squared = if h >= 1.0 { h * h } else { h };
    if squared == 0.0 {
        return Ok(AdjustedTweets {
            mantissa: 0.0,
            exponent: 0,
            value: 0.0,
        });
    }
    if squared < 10.0 {
        return Ok(AdjustedTweets {
            mantissa: squared,
            exponent: 0,
            value: squared / 10.0,
        });
    }
    let exponent = decimal_exponent(squared) - 1;
    let mantissa = (squared / 10f64.powi(exponent as i32)).floor();
    Ok(AdjustedTweets {
        mantissa,
        exponent,
        value: mantissa / 10.0 + 10.0 * exponent as f64,
    })
}

/// `floor(log10(x))` for `x >= 1`, corrected for rounding in `log10`.
fn decimal_exponent(x: f64) -> u32 {
    let mut e = x.log10().floor().max(0.0) as i32;
    while 10f64.powi(e + 1) <= x {
        e += 1;
    }
    while e > 0 && 10f64.powi(e) > x {
        e -= 1;
    }
    e as u32
}

/// `floor(log10(n))`, with 0 for both 0 and 1.
pub fn order_of_magnitude(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        n.ilog10()
    }
}

/// `log10(followers / following + 1)`; `following = 0` counts as 1.
pub fn audience_factor(followers: u64, following: u64) -> f64 {
    (followers as f64 / following.max(1) as f64 + 1.0).log10()
}

fn check_not_after(timeline: &[Tweet], now: DateTime<Utc>) -> Result<(), MetricsError> {
    match timeline.iter().find(|t| t.created_at > now) {
        Some(t) => Err(MetricsError::TweetInFuture {
            id: t.id.clone(),
            created_at: t.created_at,
            now,
        }),
        None => Ok(()),
    }
}

pub fn window_stats(timeline: &[Tweet], now: DateTime<Utc>) -> Result<TimelineWindow, MetricsError> {
    check_not_after(timeline, now)?;
    let Some(oldest) = timeline.iter().map(|t| t.created_at).min() else {
        return Ok(TimelineWindow::EMPTY);
    };
    let span = (now - oldest).to_std().unwrap_or_default();
    let hours = (span.as_secs_f64() / 3600.0).max(MIN_WINDOW_HOURS);
    let k = timeline.len() as f64;
    let retweets = timeline.iter().filter(|t| t.is_retweet).count() as f64;
    let replies = timeline.iter().filter(|t| t.in_reply_to.is_some()).count() as f64;
    Ok(TimelineWindow {
        tweets_k: timeline.len() as u64,
        hours_since_kth: hours,
        tweets_per_day: 24.0 * k / hours,
        rt_percent: 100.0 * retweets / k,
        reply_ratio: replies / k,
    })
}

pub fn influence_metric(
    window: &TimelineWindow,
    followers: u64,
    following: u64,
    rt_h_index: f64,
) -> Result<f64, MetricsError> {
    let hours = window.hours_since_kth;
    if !hours.is_finite() || hours < MIN_WINDOW_HOURS {
        return Err(MetricsError::InvalidWindow(hours));
    }
    let adjusted = adjusted_tweets(rt_h_index)?;
    let magnitude = order_of_magnitude(followers);
    if window.tweets_k == 0 || magnitude == 0 {
        return Ok(0.0);
    }
    let rate = (window.tweets_k as f64 + adjusted.value) / hours;
    Ok(rate * f64::from(magnitude) * audience_factor(followers, following))
}

/// Per-day estimate of an h-index measured over `window`; spans shorter than
/// a day count as one day.
pub fn daily_h_estimate(h: u64, window: &TimelineWindow) -> f64 {
    h as f64 / (window.hours_since_kth / 24.0).max(1.0)
}

/// Computes both metric bundles for `snapshot` as of `now`.
///
/// The account's own retweets of other accounts are left out of the
/// h-indexes (their counts belong to the original poster); the ratios use the
/// whole window.
pub fn compute_profile(
    snapshot: &AccountSnapshot,
    now: DateTime<Utc>,
) -> Result<AccountProfile, MetricsError> {
    snapshot.validate()?;
    let window = window_stats(&snapshot.timeline, now)?;
    let own: Vec<&Tweet> = snapshot.timeline.iter().filter(|t| !t.is_retweet).collect();
    let rt_h = h_index(&own.iter().map(|t| t.retweet_count).collect::<Vec<_>>());
    let fav_h = h_index(&own.iter().map(|t| t.favorite_count).collect::<Vec<_>>());

    let general = GeneralInfo {
        tweets: snapshot.total_tweets,
        tweets_per_day: window.tweets_per_day,
        rt_percent: window.rt_percent,
        followers: snapshot.followers,
        following: snapshot.following,
    };
    let quality = QualityMetrics {
        h_index_rt: rt_h as f64,
        h_index_fav: fav_h as f64,
        h_index_rt_daily: daily_h_estimate(rt_h, &window),
        h_index_fav_daily: daily_h_estimate(fav_h, &window),
        reply_ratio: window.reply_ratio,
        influence_metric: influence_metric(
            &window,
            snapshot.followers,
            snapshot.following,
            rt_h as f64,
        )?,
    };
    Ok(AccountProfile {
        general,
        quality,
        window,
    })
}
