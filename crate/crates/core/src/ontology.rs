//! The InfluenceTracker vocabulary (FOAF plus the `it:` namespace), minting
//! of slash-style resource IRIs and triplification of account profiles.

use std::collections::BTreeSet;
use std::hash::Hasher;

use fnv::FnvHasher;
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use crate::metrics::{AccountSnapshot, GeneralInfo, QualityMetrics};
use crate::rdfmodel::{xsd, Graph, Iri, Literal, PrefixMap};

macro_rules! terms {
    ($ns:literal; $($name:ident = $local:literal),* $(,)?) => {
        pub const NS: &str = $ns;
        $(pub const $name: &str = concat!($ns, $local);)*
    };
}

pub mod it {
    terms!("http://www.influencetracker.com/ontology#";
        USER = "User",
        TWITTER_ACCOUNT = "TwitterAccount",
        GENERAL_INFO = "GeneralInfo",
        QUALITY_METRICS = "QualityMetrics",
        HASHTAG = "Hashtag",
        URL_CLASS = "URL",
        HAS_GENERAL_INFO = "hasGeneralInfo",
        HAS_MENTIONED = "hasMentioned",
        HAS_QUALITY_METRICS = "hasQualityMetrics",
        HAS_REPLIED_TO = "hasRepliedTo",
        INCLUDED_HASHTAG = "includedHashtag",
        INCLUDED_IMAGE = "includedImage",
        INCLUDED_URL = "includedUrl",
        DESCRIPTION = "description",
        DISPLAY_NAME = "displayName",
        FOLLOWERS = "followers",
        FOLLOWING = "following",
        H_INDEX_FAV = "hIndexFav",
        H_INDEX_FAV_DAILY = "hIndexFavDaily",
        H_INDEX_RT = "hIndexRt",
        H_INDEX_RT_DAILY = "hIndexRtDaily",
        IMAGE_URL = "imageUrl",
        INFLUENCE_METRIC = "influenceMetric",
        PROFILE_LOCKED = "profileLocked",
        REPLY_RATIO = "replyRatio",
        RETRIEVED_ON = "retrievedOn",
        RT_PERCENT = "rtPercent",
        TWEETS = "tweets",
        TWEETS_PER_DAY = "tweetsPerDay",
        URL = "url",
    );
}

pub mod foaf {
    terms!("http://xmlns.com/foaf/0.1/";
        AGENT = "Agent",
        ONLINE_ACCOUNT = "OnlineAccount",
        DOCUMENT = "Document",
        IMAGE = "Image",
        ACCOUNT = "account",
        ACCOUNT_SERVICE_HOMEPAGE = "accountServiceHomepage",
        ACCOUNT_NAME = "accountName",
    );
}

pub mod rdf {
    terms!("http://www.w3.org/1999/02/22-rdf-syntax-ns#"; TYPE = "type");
}

pub mod rdfs {
    terms!("http://www.w3.org/2000/01/rdf-schema#";
        SUB_CLASS_OF = "subClassOf",
        LABEL = "label",
    );
}

pub mod owl {
    terms!("http://www.w3.org/2002/07/owl#";
        CLASS = "Class",
        OBJECT_PROPERTY = "ObjectProperty",
        DATATYPE_PROPERTY = "DatatypeProperty",
    );
}

pub const CLASSES: [&str; 10] = [
    foaf::AGENT,
    it::USER,
    foaf::ONLINE_ACCOUNT,
    it::TWITTER_ACCOUNT,
    it::GENERAL_INFO,
    it::QUALITY_METRICS,
    foaf::DOCUMENT,
    foaf::IMAGE,
    it::HASHTAG,
    it::URL_CLASS,
];

pub const OBJECT_PROPERTIES: [&str; 9] = [
    foaf::ACCOUNT,
    foaf::ACCOUNT_SERVICE_HOMEPAGE,
    it::HAS_GENERAL_INFO,
    it::HAS_MENTIONED,
    it::HAS_QUALITY_METRICS,
    it::HAS_REPLIED_TO,
    it::INCLUDED_HASHTAG,
    it::INCLUDED_IMAGE,
    it::INCLUDED_URL,
];

pub const DATATYPE_PROPERTIES: [&str; 18] = [
    foaf::ACCOUNT_NAME,
    it::DESCRIPTION,
    it::DISPLAY_NAME,
    it::FOLLOWERS,
    it::FOLLOWING,
    it::H_INDEX_FAV,
    it::H_INDEX_FAV_DAILY,
    it::H_INDEX_RT,
    it::H_INDEX_RT_DAILY,
    it::IMAGE_URL,
    it::INFLUENCE_METRIC,
    it::PROFILE_LOCKED,
    it::REPLY_RATIO,
    it::RETRIEVED_ON,
    it::RT_PERCENT,
    it::TWEETS,
    it::TWEETS_PER_DAY,
    it::URL,
];

/// `(subclass, superclass)` pairs of the class hierarchy.
pub const SUBCLASS_AXIOMS: [(&str, &str); 3] = [
    (it::USER, foaf::AGENT),
    (it::TWITTER_ACCOUNT, foaf::ONLINE_ACCOUNT),
    (foaf::IMAGE, foaf::DOCUMENT),
];

pub const DEFAULT_BASE: &str = "http://www.influencetracker.com/";
pub const TWITTER_HOMEPAGE: &str = "https://twitter.com/";

/// Vocabulary term as an [`Iri`].
pub fn term(iri: &'static str) -> Iri {
    Iri::from_static(iri)
}

pub fn default_base() -> Iri {
    term(DEFAULT_BASE)
}

/// Prefixes used for Turtle output and accepted by default in examples.
pub fn default_prefixes() -> PrefixMap {
    [
        ("it", it::NS),
        ("foaf", foaf::NS),
        ("rdf", rdf::NS),
        ("rdfs", rdfs::NS),
        ("owl", owl::NS),
        ("xsd", xsd::NS),
    ]
    .into_iter()
    .map(|(p, ns)| (p.to_string(), term(ns)))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResourceKind {
    User,
    TwitterAccount,
    GeneralInfo,
    QualityMetrics,
    Hashtag,
    Url,
    Image,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 7] = [
        ResourceKind::User,
        ResourceKind::TwitterAccount,
        ResourceKind::GeneralInfo,
        ResourceKind::QualityMetrics,
        ResourceKind::Hashtag,
        ResourceKind::Url,
        ResourceKind::Image,
    ];

    /// Path segment, which is the local name of the kind's class.
    pub fn segment(self) -> &'static str {
        match self {
            ResourceKind::User => "User",
            ResourceKind::TwitterAccount => "TwitterAccount",
            ResourceKind::GeneralInfo => "GeneralInfo",
            ResourceKind::QualityMetrics => "QualityMetrics",
            ResourceKind::Hashtag => "Hashtag",
            ResourceKind::Url => "URL",
            ResourceKind::Image => "Image",
        }
    }

    pub fn from_segment(segment: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.segment() == segment)
    }

    pub fn class(self) -> &'static str {
        match self {
            ResourceKind::User => it::USER,
            ResourceKind::TwitterAccount => it::TWITTER_ACCOUNT,
            ResourceKind::GeneralInfo => it::GENERAL_INFO,
            ResourceKind::QualityMetrics => it::QUALITY_METRICS,
            ResourceKind::Hashtag => it::HASHTAG,
            ResourceKind::Url => it::URL_CLASS,
            ResourceKind::Image => foaf::IMAGE,
        }
    }
}

/// Unreserved characters other than `.` stay literal.
const SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'_').remove(b'~');

/// Stable 64-bit FNV-1a digest of a URL, as 16 lowercase hex digits.
pub fn url_digest(url: &str) -> String {
    let mut hasher = FnvHasher::default();
    hasher.write(url.as_bytes());
    format!("{:016x}", hasher.finish())
}

/// `base + "resource/" + kind + "/" + percent-encoded(segment)`, with
/// `segment` used verbatim (no URL hashing).
pub fn resource_iri(base: &Iri, kind: ResourceKind, segment: &str) -> Iri {
    let base = base.as_str();
    let sep = if base.ends_with('/') { "" } else { "/" };
    let encoded = utf8_percent_encode(segment, SEGMENT);
    Iri::new(format!("{base}{sep}resource/{}/{encoded}", kind.segment()))
        .expect("base is absolute and the segment is percent-encoded")
}

/// Mints the IRI for `local`. URL resources are named by [`url_digest`] of
/// the URL text.
pub fn mint_resource_iri(base: &Iri, kind: ResourceKind, local: &str) -> Iri {
    match kind {
        ResourceKind::Url => resource_iri(base, kind, &url_digest(local)),
        _ => resource_iri(base, kind, local),
    }
}

/// The per-account resources whose descriptions are replaced on refresh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccountIris {
    pub user: Iri,
    pub account: Iri,
    pub general: Iri,
    pub quality: Iri,
}

impl AccountIris {
    pub fn new(base: &Iri, screen_name: &str) -> Self {
        AccountIris {
            user: mint_resource_iri(base, ResourceKind::User, screen_name),
            account: mint_resource_iri(base, ResourceKind::TwitterAccount, screen_name),
            general: mint_resource_iri(base, ResourceKind::GeneralInfo, screen_name),
            quality: mint_resource_iri(base, ResourceKind::QualityMetrics, screen_name),
        }
    }

    /// Subjects overwritten when the account is refreshed.
    pub fn replaced_subjects(&self) -> [&Iri; 3] {
        [&self.account, &self.general, &self.quality]
    }
}

/// Declares every class and property plus the three subclass axioms.
pub fn ontology_schema_graph() -> Graph {
    let mut g = Graph::new();
    let rdf_type = term(rdf::TYPE);
    let declarations = [
        (&CLASSES[..], owl::CLASS),
        (&OBJECT_PROPERTIES[..], owl::OBJECT_PROPERTY),
        (&DATATYPE_PROPERTIES[..], owl::DATATYPE_PROPERTY),
    ];
    for (terms, kind) in declarations {
        for &t in terms {
            g.add(&term(t), &rdf_type, term(kind));
        }
    }
    let sub_class_of = term(rdfs::SUB_CLASS_OF);
    for (sub, sup) in SUBCLASS_AXIOMS {
        g.add(&term(sub), &sub_class_of, term(sup));
    }
    g
}

/// Converts one computed account into triples.
///
/// Mentioned and replied-to users get only a type triple here; their own
/// details appear once they are processed themselves.
pub fn triplify(
    snapshot: &AccountSnapshot,
    general: &GeneralInfo,
    quality: &QualityMetrics,
    base: &Iri,
) -> Graph {
    let mut g = Graph::new();
    let ids = AccountIris::new(base, &snapshot.screen_name);
    let a = term(rdf::TYPE);
    let (u, t, gi, q) = (&ids.user, &ids.account, &ids.general, &ids.quality);

    g.add(u, &a, term(it::USER));
    g.add(u, &term(foaf::ACCOUNT), t.clone());
    g.add(t, &a, term(it::TWITTER_ACCOUNT));
    g.add(t, &term(foaf::ACCOUNT_NAME), Literal::string(&snapshot.screen_name));
    g.add(t, &term(foaf::ACCOUNT_SERVICE_HOMEPAGE), term(TWITTER_HOMEPAGE));
    g.add(t, &term(it::DISPLAY_NAME), Literal::string(&snapshot.display_name));
    if !snapshot.description.is_empty() {
        g.add(t, &term(it::DESCRIPTION), Literal::string(&snapshot.description));
    }
    g.add(t, &term(it::PROFILE_LOCKED), Literal::boolean(snapshot.protected));
    g.add(t, &term(it::RETRIEVED_ON), Literal::date_time(snapshot.retrieved_at));

    g.add(u, &term(it::HAS_GENERAL_INFO), gi.clone());
    g.add(gi, &a, term(it::GENERAL_INFO));
    g.add(gi, &term(it::TWEETS), Literal::integer(general.tweets));
    g.add(gi, &term(it::FOLLOWERS), Literal::integer(general.followers));
    g.add(gi, &term(it::FOLLOWING), Literal::integer(general.following));
    g.add(gi, &term(it::TWEETS_PER_DAY), Literal::decimal(general.tweets_per_day));
    g.add(gi, &term(it::RT_PERCENT), Literal::decimal(general.rt_percent));

    g.add(u, &term(it::HAS_QUALITY_METRICS), q.clone());
    g.add(q, &a, term(it::QUALITY_METRICS));
    let quality_values = [
        (it::INFLUENCE_METRIC, quality.influence_metric),
        (it::H_INDEX_RT, quality.h_index_rt),
        (it::H_INDEX_FAV, quality.h_index_fav),
        (it::H_INDEX_RT_DAILY, quality.h_index_rt_daily),
        (it::H_INDEX_FAV_DAILY, quality.h_index_fav_daily),
        (it::REPLY_RATIO, quality.reply_ratio),
    ];
    for (p, v) in quality_values {
        g.add(q, &term(p), Literal::decimal(v));
    }

    let entities = Entities::collect(snapshot);
    for (names, link) in [
        (&entities.mentions, it::HAS_MENTIONED),
        (&entities.replies, it::HAS_REPLIED_TO),
    ] {
        for name in names {
            let other = mint_resource_iri(base, ResourceKind::User, name);
            g.add(u, &term(link), other.clone());
            g.add(&other, &a, term(it::USER));
        }
    }
    for tag in &entities.hashtags {
        let h = mint_resource_iri(base, ResourceKind::Hashtag, tag);
        g.add(u, &term(it::INCLUDED_HASHTAG), h.clone());
        g.add(&h, &a, term(it::HASHTAG));
        g.add(&h, &term(rdfs::LABEL), Literal::string(*tag));
    }
    for url in &entities.urls {
        let l = mint_resource_iri(base, ResourceKind::Url, url);
        g.add(u, &term(it::INCLUDED_URL), l.clone());
        g.add(&l, &a, term(it::URL_CLASS));
        g.add(&l, &term(it::URL), Literal::string(*url));
    }
    for image in &entities.images {
        let i = mint_resource_iri(base, ResourceKind::Image, image);
        g.add(u, &term(it::INCLUDED_IMAGE), i.clone());
        g.add(&i, &a, term(foaf::IMAGE));
        g.add(&i, &term(it::IMAGE_URL), Literal::string(*image));
    }
    g
}

/// Distinct entities across a snapshot's timeline.
#[derive(Debug, Default)]
struct Entities<'a> {
    mentions: BTreeSet<&'a str>,
    replies: BTreeSet<&'a str>,
    hashtags: BTreeSet<&'a str>,
    urls: BTreeSet<&'a str>,
    images: BTreeSet<&'a str>,
}

impl<'a> Entities<'a> {
    fn collect(snapshot: &'a AccountSnapshot) -> Self {
        let mut e = Entities::default();
        for tweet in &snapshot.timeline {
            e.mentions.extend(tweet.mentions.iter().map(String::as_str));
            e.replies.extend(tweet.in_reply_to.as_deref());
            e.hashtags.extend(tweet.hashtags.iter().map(String::as_str));
            e.urls.extend(tweet.urls.iter().map(String::as_str));
            e.images.extend(tweet.image_urls.iter().map(String::as_str));
        }
        e
    }
}
