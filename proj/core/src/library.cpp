#include "hwdb/library.hpp"

#include "hwdb/parser.hpp"

namespace hwdb {

namespace {

constexpr std::string_view kPredefined = R"DELTA(
set query Pair (set x,set y) be
    { 'fst':x, 'snd':y },

boolean query isPair (set p) be (
        exists l: x in p . (
            l='fst'
            and
            forall m:z in p . ( m='fst' => z=x )
        )
        and
        exists l:y in p . (
            l='snd'
            and
            forall m:z in p .( m='snd' => z=y )
        )
    ),

set query First (set p) be
    union separate { l:x in p where l='fst' },

set query Second (set p) be
    union separate { l:x in p where l='snd' },

set query CartProduct (set x,set y) be
    union collect {
        'null':collect {
            'null':call Pair ( xx, yy )
            where l:yy in y
        }
        where m : xx in x
    },

set query Square (set z) be
    call CartProduct ( z, z ),

set query LabelledPairs (set v) be
    collect { l:{ 'fst':v, 'snd':u } where l:u in v },

set query Nodes (set g) be
    union separate { m:p in g where call isPair ( p ) },

set query Children (set x,set g) be
    collect {
        l:call Second ( p )
        where l:p in g
        and (
            call isPair ( p )
            and
            call First ( p ) = x
        )
    },

set query Regroup (set g) be
    collect {
        'null':call Pair ( x, call Children ( x , g ) )
        where m : x in call Nodes ( g )
    },

set query CanGraph (set x) be
    union collect {
        'null':call LabelledPairs ( v )
         where m:v in TC ( x )
    },

set query Can (set x) be
    decorate ( call CanGraph ( x ), x ),

set query TCPure(set x) be
    collect{ 'null':v where l:v in TC ( x ) },

set query HorizontalTC (set g) be
    recursion p {
        'null':pair in call Square ( call Nodes ( g ) )
        where (
            call First ( pair ) = call Second ( pair )
            or
            exists m:z in call Nodes ( g ) . (
               'null':call Pair ( call First ( pair ), z ) in p
               and
               'null':call Pair ( z, call Second ( pair ) ) in g
            )
        )
    },

set query TC_along_label (label l,set z) be
    recursion p {
        k:x in TC ( z )
        where (
            ( x=z and k = 'null' )
            or
            ( k=l and exists m:y in p . l:x in y )
        )
    },

set query SuccessorPairs (set L) be
    separate {
        l:pair in L
        where not exists l:x in call Nodes(L) . (
            'null':call Pair ( call First ( pair ),x ) in L
            and
            'null':call Pair ( x, call Second ( pair ) ) in L
        )
    },

boolean query Precedes5(set R,label l,set x,label m,set y) be (
        l < m
        or (
            l=m
            and
            exists 'null':p in R . (
                'fst':x in p and 'snd':y in p
            )
        )
    ),

set query StrictLinOrder_on_TC (set z) be
    recursion R {
        'null':p_xy in call Square( call Can(call TCPure(z)) )
        where (
            (
              not 'null':p_xy in R
              and
              not exists 'fst':xx in p_xy .
                    exists 'snd':yy in p_xy .
                      exists 'null':inv_p in R . (
                        'fst':yy in inv_p
                        and
                        'snd':xx in inv_p
                      )
            )
            and
            exists 'snd':yyy in p_xy .
              exists lu:u in yyy . (
                exists 'fst':xxx in p_xy .
                  forall lv:v in xxx . (
                    call Precedes5(R,lu,u, lv,v)
                    or
                    call Precedes5(R,lv,v, lu,u)
                  )
                and
                forall fs:xy in p_xy .
                  forall lw:w in xy . (
                    call Precedes5(R,lu,u, lw,w) =>
                    exists 'fst':xxxx in p_xy .
                      exists lp:p in xxxx .
                        exists 'snd':yyyy in p_xy .
                          exists lq:q in yyyy . (
                            not call Precedes5(R,lp,p, lw,w) and
                            not call Precedes5(R,lw,w, lp,p) and
                            not call Precedes5(R,lq,q, lw,w) and
                            not call Precedes5(R,lw,w, lq,q)
                          )
                  )
              )
        )
    }
)DELTA";

std::string summary_of(const Node& d) {
    std::string out = d.kid(0)->text + " " + d.kid(1)->text + " " + d.kid(2)->ident();
    if (d.cat == Cat::SetQueryDecl || d.cat == Cat::BooleanQueryDecl) {
        out += " (";
        if (d.kid(4)->cat == Cat::Variables) {
            bool first = true;
            for (const auto& v : d.kid(4)->kids) {
                if (v->is_leaf()) continue;
                if (!first) out += ",";
                first = false;
                out += v->kid(0)->text + " " + v->kid(1)->ident();
            }
        }
        out += ")";
    }
    return out;
}

}  // namespace

std::string_view predefined_library_source() {
    auto s = kPredefined;
    s.remove_prefix(1);
    s.remove_suffix(1);
    return s;
}

std::vector<LibraryEntry> split_declarations(std::string_view source) {
    auto pr = parse_declarations(source);
    std::vector<LibraryEntry> out;
    for (const auto& d : pr.tree->kids) {
        if (d->is_leaf()) continue;
        out.push_back({std::string(source.substr(d->begin, d->end - d->begin)), summary_of(*d)});
    }
    return out;
}

const std::vector<LibraryEntry>& predefined_library() {
    static const std::vector<LibraryEntry> lib = split_declarations(predefined_library_source());
    return lib;
}

}  // namespace hwdb
