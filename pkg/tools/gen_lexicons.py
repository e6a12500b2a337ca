"""One-shot generator for the bundled lexicon resource files.

Run from the repository root:

    python3 tools/gen_lexicons.py

Outputs land in src/writelab/resources/ and are committed; the package never
regenerates them at runtime. Sources:

- stopwords.txt: frozen copy of scikit-learn's public English stop-word list
  (sklearn is a generation-time-only dependency).
- common_words.txt: curated, approximately frequency-ranked list of everyday
  English lemmas (function words first, then core verbs/nouns/adjectives).
  Entries are normalized with the package lemmatizer and deduplicated keeping
  the first (highest-ranked) occurrence.
- male_words.txt / female_words.txt: curated gendered lexicons (pronouns,
  kinship terms, titles, and strongly gendered role nouns), disjoint.
- lemma_exceptions.txt: irregular inflections and suffix-stripper fixups.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from writelab.textproc import lemmatize  # noqa: E402

OUT_DIR = ROOT / "src" / "writelab" / "resources"

LEMMA_EXCEPTIONS = """
was be | were be | is be | am be | are be | been be | being be
has have | had have
does do | did do | done do
went go | gone go
said say | made make | ate eat | eaten eat | ran run | slept sleep
kept keep | left leave | felt feel | met meet | meant mean | sent send
spent spend | built build | lost lose | told tell | sold sell | bought buy
brought bring | thought think | fought fight | caught catch | taught teach
sought seek | took take | taken take | gave give | given give | came come
saw see | seen see | knew know | known know | grew grow | grown grow
threw throw | thrown throw | flew fly | flown fly | drew draw | drawn draw
wrote write | written write | rode ride | ridden ride | rose rise
risen rise | drove drive | driven drive | broke break | broken break
spoke speak | spoken speak | chose choose | chosen choose | froze freeze
frozen freeze | stole steal | stolen steal | woke wake | woken wake
began begin | begun begin | drank drink | drunk drink | sang sing
sung sing | swam swim | swum swim | rang ring | rung ring | sank sink
sunk sink | stood stand | understood understand | held hold | heard hear
found find | got get | gotten get | sat sit | lay lie | lain lie | laid lay
paid pay | read read | led lead | fed feed | bled bleed | bred breed
sped speed | fled flee | won win | shone shine | shot shoot | struck strike
hung hang | dug dig | stuck stick | swung swing | wore wear | worn wear
tore tear | torn tear | bore bear | borne bear | swore swear | sworn swear
fell fall | fallen fall | beaten beat | bent bend | lent lend | burnt burn
learnt learn | dreamt dream | dealt deal | crept creep | wept weep
slid slide | hid hide | hidden hide | bit bite | bitten bite | lit light
forgot forget | forgotten forget | forgave forgive | forgiven forgive
became become | arose arise | arisen arise | awoke awake | blew blow
blown blow | knelt kneel | shook shake | shaken shake | spun spin
wound wind | sprang spring | sprung spring
men man | women woman | children child | mice mouse | feet foot
teeth tooth | geese goose | oxen ox | wolves wolf | wives wife
knives knife | lives life | leaves leaf | loaves loaf | halves half
shelves shelf | selves self | thieves thief | calves calf | scarves scarf
elves elf | hooves hoof | phenomena phenomenon | criteria criterion
analyses analysis | crises crisis | theses thesis | hypotheses hypothesis
indices index | matrices matrix | appendices appendix
news news | series series | species species | movies movie | lies lie
ties tie | dies die | pies pie | shoes shoe | heroes hero | gas gas
bias bias | canvas canvas | atlas atlas | alias alias | lens lens
yes yes | always always | perhaps perhaps | besides besides
whereas whereas | sometimes sometimes | physics physics
mathematics mathematics | economics economics | politics politics
ethics ethics
used use | using use | agreed agree | freed free | guaranteed guarantee
owed owe | owing owe | dyed dye | eyed eye | died die | dying die
lied lie | lying lie | tied tie | tying tie
caused cause | causing cause | argued argue | arguing argue
continued continue | continuing continue | changed change | changing change
managed manage | managing manage | judged judge | judging judge
danced dance | dancing dance | placed place | placing place
forced force | forcing force | noticed notice | noticing notice
produced produce | producing produce | reduced reduce | reducing reduce
introduced introduce | practiced practice | experienced experience
balanced balance | enhanced enhance | increased increase
increasing increase | decreased decrease | decreasing decrease
created create | creating create | imagined imagine | imagining imagine
"""

MALE_WORDS = """
he him his himself man men boy boys male males gentleman gentlemen mr sir
father fathers dad dads daddy papa grandfather grandfathers grandpa son sons
brother brothers uncle uncles nephew nephews husband husbands groom grooms
widower widowers king kings prince princes lord lords duke dukes emperor
emperors waiter waiters actor actors boyfriend boyfriends mister lad lads
"""

FEMALE_WORDS = """
she her hers herself woman women girl girls female females lady ladies mrs
ms miss madam mother mothers mom moms mommy mama grandmother grandmothers
grandma daughter daughters sister sisters aunt aunts niece nieces wife wives
bride brides widow widows queen queens princess princesses duchess duchesses
empress empresses waitress waitresses actress actresses girlfriend
girlfriends maiden maidens
"""

# Curated, approximately frequency-ranked list of everyday English words.
# Rank bands: core function words, then high-frequency verbs, nouns,
# adjectives, adverbs/prepositions, and time/number vocabulary.
COMMON_WORDS = """
the be to of and a in that have i it for not on with he as you do at this
but his by from they we say her she or an will my one all would there their
what so up out if about who get which go me when make can like time no just
him know take people into year your good some could them see other than then
now look only come its over think also back after use two how our work first
well way even new want because any these give day most us

is was are were been has had did said went gone made

ask seem feel try leave call keep let begin help talk turn start show hear
play run move live believe hold bring happen write provide sit stand lose
pay meet include continue set learn change lead understand watch follow stop
create speak read allow add spend grow open walk win offer remember love
consider appear buy wait serve die send expect build stay fall cut reach
kill remain suggest raise pass sell require report decide pull eat sleep
sing dance jump laugh cry smile drink drive fly swim climb throw catch carry
push teach study visit travel cook clean wash wear fight hit break fix agree
answer arrive become borrow bother breathe burn care cause celebrate check
choose close collect compare complete contain cost count cover cross dream
dress drop earn end enjoy enter escape explain express face fail fill find
finish fit forget forgive freeze guess hang hate hide hope hunt hurt imagine
improve invite join kick kiss knock land last lay lie lift listen lock
manage mark marry matter mean measure mention mind miss mix need note notice
obtain occur order own paint pick place plan plant point prefer prepare
present press prevent produce promise protect prove pump quit realize
receive recognize record reduce refer reflect refuse relate release rely
remove repeat replace reply rest return reveal ride ring rise roll rub save
search seek select shake share shine shoot shout shut sign sink smell sort
sound spell spread spring stare state steal stick store stretch strike
succeed suffer supply support suppose surround survive swear sweep swing
tear tell tend test thank tie touch train treat trust type wake want warn
waste wave weigh welcome wish wonder worry wrap argue judge force increase
decrease introduce practice experience balance enhance guarantee owe dye
deal feed flee breed bleed speed kneel weep creep slide bite light shade
pour stir bake bark purr chase dig wander float drift whisper scream sail
row fish hug nod blink stumble gather settle deliver attend describe discuss
develop design discover encourage establish examine exist explore focus
identify indicate influence inform involve maintain observe occur operate
participate perform predict publish pursue recommend represent respond
achieve acquire adapt adjust admire admit advise affect afford aim announce
apologize applaud apply appreciate approach approve arrange assist assume
attract avoid behave belong blame boil book bounce bow calculate camp cancel
cheer chew claim clap combine comment communicate compete complain concern
confirm confuse connect consist consult contact contribute convince copy
correct crash crawl curl damage declare decorate defend define delay demand
deny depend destroy disagree disappear doubt earn educate elect employ empty
encounter engage entertain erase estimate exchange excuse exercise expand
experiment fold fry gain glow grab greet grind guard handle heat hire honor
host identify ignore illustrate impress insist inspect inspire install
intend interrupt interview invent invest investigate iron knit label lack
launch lean leap lend level license limit link load locate major mend
migrate model modify motivate murmur negotiate object oblige obtain offend
oppose organize overcome pack paddle park pause perceive permit persuade
phone photograph pile pinch pitch plead plug polish ponder pop possess post
postpone pray preach precede prescribe preserve pretend print proceed
process program progress prohibit project promote propose prosper provide
punish purchase qualify question queue race rain rank rate react reason
rebuild recall recover recycle regard register regret rehearse reject
relax remark remind rent repair request require rescue research reserve
resist resolve respect restore retire reuse review reward rhyme rip roam
roast rock rot rush rust sample satisfy scan scatter schedule scold scoop
score scrape scratch screw seal season seat secure seize sense separate
sew shape shave shelter shift ship shiver shop shrink sigh signal simplify
sip ski skip slam slap slice slip smash smooth snap sneeze sniff snow soak
solve sow spare spark spill spin split spoil spot spray sprint squeeze
stack stamp steer stem step stitch strain stress strip stroke struggle
submit subtract suck suggest suit supervise surprise suspect swallow sweat
switch tame tap taste tempt terrify thaw tick tickle tidy tighten tip
toast tolerate toss trace trade transfer transform translate transport
trap tremble trick trim trip tumble tune twist undergo underline undo
unfold unite unlock unpack update upgrade upset urge vanish vary volunteer
vote wag wail wait wake wander warm watch water weave weep whine whistle
widen wind wink wipe witness worship yawn yell yield zip

time year people way day man thing woman life child world school state
family student group country problem hand part place case week company
system program question work government number night point home water room
mother area money story fact month lot right study book eye job word
business issue side kind head house service friend father power hour game
line end member law car city community name president team minute idea body
information back parent face others level office door health person art war
history party result change morning reason research girl guy moment air
teacher force education foot boy age policy process music market sense
nation plan college interest death experience effect use class control
care field development role effort rate heart drug show leader light voice
wife police mind price report decision son view relationship town road
arm difference value building action model season society tax director
position player record paper space ground form event official matter
center couple site project activity star table need court american oil
situation cost industry figure street image phone data picture practice
piece land product doctor wall patient worker news test movie north love
support technology money kid brother sister dog cat animal bird fish horse
cow pig sheep chicken mouse bear lion tiger elephant monkey rabbit snake
tree flower grass leaf plant garden forest mountain river lake sea ocean
beach island sky sun moon star cloud rain snow wind storm fire ice earth
stone rock sand soil gold silver iron metal glass wood paper cloth wool
cotton silk leather food bread meat fruit apple orange banana grape lemon
vegetable potato tomato onion carrot rice corn wheat milk cheese butter
egg sugar salt pepper oil tea coffee juice wine beer cake cookie candy
chocolate soup salad sandwich pizza breakfast lunch dinner meal kitchen
bathroom bedroom window floor roof stairs chair desk bed sofa lamp clock
mirror shelf drawer cup plate bowl spoon fork knife bottle box bag basket
key lock camera radio television computer screen keyboard internet email
letter card map ticket passport luggage hotel airport station train bus
boat ship plane bicycle wheel engine fuel bridge tunnel highway corner
block neighborhood village farm barn fence gate yard pool park playground
store shop mall bank hospital library museum church temple castle tower
palace stadium theater cinema restaurant cafe bar club gym pharmacy
bakery butcher grocery market office factory warehouse laboratory studio
gallery garage basement attic balcony porch lawn path trail hill valley
desert jungle cave cliff coast shore wave tide current stream pond puddle
rainbow thunder lightning fog mist frost dew sunrise sunset shadow light
darkness color red blue green yellow black white brown pink purple gray
silver golden season spring summer autumn winter january february march
april may june july august september october november december monday
tuesday wednesday thursday friday saturday sunday today tomorrow yesterday
weekend holiday vacation birthday wedding funeral ceremony festival
tradition culture language english history geography science mathematics
physics chemistry biology economics politics philosophy psychology
literature poetry novel essay article magazine newspaper journal diary
notebook page chapter paragraph sentence word letter alphabet grammar
vocabulary speech conversation discussion debate argument opinion belief
thought memory knowledge wisdom skill talent ability strength weakness
courage fear hope dream goal purpose reason cause effect result success
failure mistake error problem solution answer question secret truth exam
surprise gift present prize reward punishment crime thief police judge
lawyer court prison guard soldier army navy weapon gun sword shield battle
victory defeat peace treaty agreement contract deal promise duty
responsibility right freedom justice equality respect honor pride shame
guilt sorrow grief joy happiness pleasure comfort pain suffering illness
disease medicine cure treatment surgery nurse dentist fever cough cold flu
headache wound injury accident emergency ambulance safety danger risk
warning signal sign symbol mark spot line circle square triangle shape
size weight height length width depth distance speed direction north
south east west left right top bottom middle center edge border limit
boundary surface level layer row column list order sequence pattern
structure frame base foundation support beam column pillar brick cement
concrete tool hammer nail screw saw drill ladder rope chain wire cable
pipe tank pump machine device instrument equipment material substance
chemical element atom molecule cell organ muscle bone blood skin hair
face forehead eyebrow eyelash cheek chin jaw lip tongue tooth throat neck
shoulder chest stomach waist hip leg knee ankle toe finger thumb wrist
elbow nail brain lung liver kidney nerve vein clothing clothes shirt pants
dress skirt coat jacket sweater scarf glove hat cap shoe boot sock belt
button zipper pocket sleeve collar uniform costume fashion style beauty
makeup perfume jewelry necklace bracelet earring diamond pearl crown
wallet purse umbrella glasses watch music song melody rhythm harmony
instrument piano guitar violin drum flute trumpet concert orchestra band
singer dancer painter artist sculptor photograph painting drawing sketch
sculpture statue portrait landscape museum exhibition performance stage
audience applause ticket scene act play drama comedy tragedy film actor
role character plot theme setting sport football basketball baseball
tennis golf soccer hockey volleyball swimming running cycling skiing
skating boxing wrestling race marathon competition tournament champion
winner loser team coach referee player score goal net ball bat racket
court field track pool medal trophy
number zero one two three four five six seven eight nine ten eleven twelve
twenty thirty forty fifty hundred thousand million billion half quarter
third double triple single pair dozen few several many much more less
least most all none some any every each both either neither

good new first last long great little own other old right big high
different small large next early young important public bad same able
best better low late hard major real sure clear recent strong possible
whole free true full easy close poor black white certain international
special difficult available likely short single personal open red
national wrong private past fine common natural significant similar hot
dead central happy serious ready simple left physical general
environmental financial blue democratic dark various entire final main
current green nice huge popular traditional cultural warm cold cool quiet
loud soft rough smooth sharp dull heavy light thick thin wide narrow deep
shallow tall fat flat round empty busy lazy brave calm kind cruel gentle
rude polite honest wise foolish clever smart stupid funny boring
interesting beautiful ugly pretty handsome plain fancy cheap expensive
rich wealthy hungry thirsty tired sleepy awake sick healthy weak fresh
stale clean dirty neat messy wet dry safe dangerous careful careless
proud humble shy bold angry sad glad afraid scared nervous excited bored
amazed surprised confused curious eager jealous lonely grateful stubborn
patient modern ancient strange familiar famous unknown ordinary rare
perfect broken solid liquid sour sweet bitter salty spicy delicious
tasty lovely pleasant terrible horrible wonderful marvelous excellent
awful annoying comfortable convenient necessary useful useless valuable
worthless complete partial equal separate opposite reverse straight
crooked steep gradual sudden slow quick fast rapid instant constant
frequent occasional regular usual unusual normal odd even exact
approximate accurate precise obvious subtle visible invisible apparent
hidden secret loyal faithful sincere genuine false fake artificial
original creative imaginative practical logical rational sensible
reasonable absurd ridiculous silly innocent guilty legal illegal formal
informal casual official strict flexible firm steady shaky stable
fragile sturdy tough tender mild severe intense extreme moderate
sufficient abundant scarce plentiful bare naked covered exposed sealed
tight loose secure total absolute relative temporary permanent brief
lasting eternal initial ultimate primary secondary minor senior junior
superior inferior maximum minimum average medium

very too quite rather really almost nearly hardly barely just already
still yet soon often never sometimes usually rarely seldom ever always
again once twice together alone apart away back forward ahead behind
above below under beneath inside outside nearby far everywhere somewhere
anywhere nowhere here there now then later before during while since
until though although however therefore moreover instead otherwise
meanwhile indeed certainly probably possibly maybe definitely absolutely
completely entirely exactly simply merely perhaps especially particularly
mostly mainly generally specifically actually basically finally
eventually suddenly quickly slowly carefully quietly loudly happily sadly
angrily gently firmly strongly weakly clearly plainly directly
immediately recently currently originally previously afterwards beyond
among between through across around along past toward against within
without despite regarding concerning unless whether neither nor either
because since although unless if whenever wherever whoever whatever
whichever anybody anyone anything everybody everyone everything nobody
someone something somebody nothing
"""


def _clean_words(block: str) -> list[str]:
    return [w for w in block.split() if w]


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    exceptions: dict[str, str] = {}
    for entry in LEMMA_EXCEPTIONS.replace("\n", "|").split("|"):
        entry = entry.strip()
        if not entry:
            continue
        form, base = entry.split()
        exceptions[form] = base
    exc_lines = [f"{form} {base}" for form, base in sorted(exceptions.items())]
    (OUT_DIR / "lemma_exceptions.txt").write_text("\n".join(exc_lines) + "\n", "utf-8")

    from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

    stop_lines = sorted(ENGLISH_STOP_WORDS)
    (OUT_DIR / "stopwords.txt").write_text("\n".join(stop_lines) + "\n", "utf-8")

    ranked: list[str] = []
    seen: set[str] = set()
    for word in _clean_words(COMMON_WORDS):
        lemma = lemmatize(word, exceptions)
        if lemma not in seen:
            seen.add(lemma)
            ranked.append(lemma)
    (OUT_DIR / "common_words.txt").write_text("\n".join(ranked) + "\n", "utf-8")

    male = sorted(set(_clean_words(MALE_WORDS)))
    female = sorted(set(_clean_words(FEMALE_WORDS)))
    overlap = set(male) & set(female)
    if overlap:
        raise SystemExit(f"gendered lexicons overlap: {sorted(overlap)}")
    (OUT_DIR / "male_words.txt").write_text("\n".join(male) + "\n", "utf-8")
    (OUT_DIR / "female_words.txt").write_text("\n".join(female) + "\n", "utf-8")

    print(f"common words: {len(ranked)}")
    print(f"stopwords: {len(stop_lines)}")
    print(f"male/female: {len(male)}/{len(female)}")
    print(f"lemma exceptions: {len(exceptions)}")


if __name__ == "__main__":
    main()
