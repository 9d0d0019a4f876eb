#include <string_view>
#include <vector>

#include "ccdrift/lexicon.hpp"

namespace ccdrift {

const std::vector<std::string_view>& stop_words() {
  static const std::vector<std::string_view> words = {
      "a",        "about",    "above",   "after",      "again",   "against",
      "all",      "am",       "an",      "and",        "any",     "are",
      "as",       "at",       "be",      "because",    "been",    "before",
      "being",    "below",    "between", "both",       "but",     "by",
      "can",      "could",    "did",     "do",         "does",    "doing",
      "down",     "during",   "each",    "few",        "for",     "from",
      "further",  "had",      "has",     "have",       "having",  "he",
      "her",      "here",     "hers",    "herself",    "him",     "himself",
      "his",      "how",      "i",       "if",         "in",      "into",
      "is",       "it",       "its",     "itself",     "just",    "me",
      "more",     "most",     "my",      "myself",     "no",      "nor",
      "not",      "now",      "of",      "off",        "on",      "once",
      "only",     "or",       "other",   "our",        "ours",    "ourselves",
      "out",      "over",     "own",     "same",       "she",     "should",
      "so",       "some",     "such",    "than",       "that",    "the",
      "their",    "theirs",   "them",    "themselves", "then",    "there",
      "these",    "they",     "this",    "those",      "through", "to",
      "too",      "under",    "until",   "up",         "very",    "was",
      "we",       "were",     "what",    "when",       "where",   "which",
      "while",    "who",      "whom",    "why",        "will",    "with",
      "would",    "you",      "your",    "yours",      "yourself", "yourselves",
  };
  return words;
}

namespace detail {

// word<TAB>tag, most frequent tag in ordinary English and program text.
std::string_view builtin_lexicon_tsv() {
  return R"(set	verb
get	verb
add	verb
remove	verb
delete	verb
create	verb
make	verb
build	verb
return	verb
check	verb
compute	verb
calculate	verb
update	verb
init	verb
initialize	verb
load	verb
save	verb
store	verb
read	verb
write	verb
open	verb
close	verb
start	verb
stop	verb
run	verb
execute	verb
call	verb
invoke	verb
handle	verb
process	verb
parse	verb
format	verb
convert	verb
copy	verb
move	verb
find	verb
search	verb
sort	verb
filter	verb
apply	verb
use	verb
send	verb
receive	verb
put	verb
insert	verb
append	verb
clear	verb
reset	verb
validate	verb
verify	verb
ensure	verb
throw	verb
catch	verb
try	verb
log	verb
print	verb
show	verb
hide	verb
display	verb
render	verb
draw	verb
fill	verb
register	verb
notify	verb
fire	verb
wait	verb
sleep	verb
lock	verb
unlock	verb
release	verb
allocate	verb
free	verb
assign	verb
generate	verb
compare	verb
match	verb
replace	verb
split	verb
join	verb
merge	verb
skip	verb
ignore	verb
allow	verb
enable	verb
disable	verb
support	verb
need	verb
want	verb
keep	verb
let	verb
go	verb
come	verb
take	verb
give	verb
see	verb
look	verb
know	verb
think	verb
say	verb
tell	verb
work	verb
fix	verb
change	verb
modify	verb
contain	verb
include	verb
exclude	verb
exist	verb
fail	verb
succeed	verb
pass	verb
happen	verb
default	noun
size	noun
length	noun
count	noun
number	noun
value	noun
name	noun
type	noun
list	noun
map	noun
array	noun
string	noun
file	noun
path	noun
data	noun
key	noun
index	noun
id	noun
node	noun
tree	noun
item	noun
element	noun
object	noun
class	noun
method	noun
function	noun
field	noun
variable	noun
parameter	noun
argument	noun
result	noun
error	noun
exception	noun
message	noun
user	noun
request	noun
response	noun
connection	noun
server	noun
client	noun
session	noun
buffer	noun
byte	noun
bit	noun
bytes	noun
bits	noun
time	noun
date	noun
state	noun
status	noun
mode	noun
option	noun
config	noun
configuration	noun
property	noun
event	noun
listener	noun
handler	noun
thread	noun
task	noun
job	noun
queue	noun
stack	noun
cache	noun
table	noun
row	noun
column	noun
query	noun
database	noun
record	noun
entry	noun
text	noun
line	noun
char	noun
character	noun
word	noun
token	noun
octet	noun
serial	adjective
uei	noun
bug	noun
version	noun
todo	noun
fixme	noun
null	noun
int	noun
integer	noun
long	adjective
double	adjective
float	noun
boolean	noun
void	adjective
system	noun
window	noun
view	noun
page	noun
image	noun
color	noun
font	noun
button	noun
menu	noun
panel	noun
dialog	noun
frame	noun
width	noun
height	noun
point	noun
position	noun
offset	noun
limit	noun
range	noun
level	noun
code	noun
comment	noun
source	noun
target	noun
output	noun
input	noun
stream	noun
reader	noun
writer	noun
builder	noun
factory	noun
manager	noun
service	noun
context	noun
instance	noun
reference	noun
pointer	noun
address	noun
host	noun
port	noun
url	noun
certificate	noun
algorithm	noun
generator	noun
new	adjective
old	adjective
true	adjective
false	adjective
valid	adjective
invalid	adjective
empty	adjective
full	adjective
current	adjective
previous	adjective
next	adjective
last	adjective
first	adjective
final	adjective
static	adjective
public	adjective
private	adjective
protected	adjective
abstract	adjective
local	adjective
global	adjective
internal	adjective
external	adjective
small	adjective
large	adjective
big	adjective
high	adjective
low	adjective
good	adjective
bad	adjective
simple	adjective
complex	adjective
possible	adjective
necessary	adjective
available	adjective
unique	adjective
active	adjective
visible	adjective
enabled	adjective
disabled	adjective
always	adverb
never	adverb
already	adverb
also	adverb
still	adverb
yet	adverb
even	adverb
ever	adverb
often	adverb
usually	adverb
only	adverb
again	adverb
here	adverb
there	adverb
now	adverb
then	adverb
soon	adverb
later	adverb
instead	adverb
otherwise	adverb
however	adverb
quickly	adverb
directly	adverb
i	pronoun
you	pronoun
he	pronoun
she	pronoun
it	pronoun
we	pronoun
they	pronoun
me	pronoun
him	pronoun
her	pronoun
us	pronoun
them	pronoun
itself	pronoun
something	pronoun
anything	pronoun
nothing	pronoun
everything	pronoun
someone	pronoun
anyone	pronoun
everyone	pronoun
whatever	pronoun
in	preposition
on	preposition
at	preposition
by	preposition
for	preposition
with	preposition
from	preposition
to	preposition
of	preposition
into	preposition
onto	preposition
over	preposition
under	preposition
within	preposition
without	preposition
via	preposition
per	preposition
across	preposition
behind	preposition
beyond	preposition
toward	preposition
towards	preposition
upon	preposition
and	conjunction
or	conjunction
but	conjunction
nor	conjunction
because	conjunction
although	conjunction
unless	conjunction
whereas	conjunction
whether	conjunction
since	conjunction
though	conjunction
the	determiner
a	determiner
an	determiner
this	determiner
that	determiner
these	determiner
those	determiner
each	determiner
every	determiner
either	determiner
neither	determiner
another	determiner
zero	numeral
one	numeral
two	numeral
three	numeral
four	numeral
five	numeral
six	numeral
seven	numeral
eight	numeral
nine	numeral
ten	numeral
hundred	numeral
thousand	numeral
million	numeral
)";
}

}  // namespace detail
}  // namespace ccdrift
