#pragma once

#include <pcsp/polymorphisms.hh>
#include <pcsp/structures.hh>

#include <iosfwd>
#include <string>

namespace pcsp
{
    /**
     * Template files:
     *
     *     template
     *     pair rin 1 3 nae 3
     *     pair neq neq
     *     end
     *
     * Relation specs are neq, odd s, even s, rin r s, atmost r s, atleast r s,
     * nae s, full s, const s, and explicit s t1,t2,... with each tuple written
     * as s bits. Blank lines and text after # are ignored.
     */
    auto parse_relation_spec(const std::string & spec, int line = 0) -> BoolRelation;
    auto parse_template(std::istream & in) -> Template;
    auto write_template(std::ostream & out, const Template & t) -> void;

    /// Instance files: "vars n" then one "c <pair_index> <v1> ... <vk>" per constraint.
    auto parse_instance(std::istream & in) -> Instance;
    auto write_instance(std::ostream & out, const Instance & x) -> void;

    /// Truth-table files: "fn <arity> <domain_size>" then the table in index order.
    auto parse_function(std::istream & in) -> BoolFunction;
    auto write_function(std::ostream & out, const BoolFunction & f) -> void;

    auto read_template_file(const std::string & path) -> Template;
    auto read_instance_file(const std::string & path) -> Instance;
    auto read_function_file(const std::string & path) -> BoolFunction;
}
